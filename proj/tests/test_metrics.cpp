// Copyright 2026 The tierbench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "tierbench/error.hpp"
#include "tierbench/metrics.hpp"

using namespace tierbench;
using Labels = std::vector<std::uint8_t>;

TEST_CASE("average precision examples") {
  CHECK(auc_pr(std::vector<double>{0.9, 0.8, 0.1, 0.2}, Labels{1, 1, 0, 0}) == 1.0);
  CHECK(auc_pr(std::vector<double>{3, 2, 1}, Labels{0, 0, 1}) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(auc_pr(std::vector<double>{0.5, 0.5}, Labels{1, 0}) == 0.5);
  CHECK(auc_pr(std::vector<double>{0.1, 0.7}, Labels{1, 1}) == 1.0);
  try {
    auc_pr(std::vector<double>{1, 2}, Labels{0, 0});
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kUndefinedMetric);
  }
  CHECK_THROWS_AS(auc_pr(std::vector<double>{1, 2}, Labels{1}), Error);
}

TEST_CASE("average precision matches brute-force threshold enumeration") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng() % 64;
    // Few distinct values force ties.
    const int levels = 1 + static_cast<int>(rng() % 12);
    std::vector<double> s(n);
    Labels l(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = static_cast<double>(rng() % levels) / 3.0;
      l[i] = rng() % 3 == 0;
    }
    l[rng() % n] = 1;
    CHECK(std::abs(auc_pr(s, l) - testing::ap_oracle(s, l)) < 1e-12);
  }
}

TEST_CASE("average precision is invariant under increasing transforms") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> s(100), t(100);
    Labels l(100);
    for (int i = 0; i < 100; ++i) {
      s[i] = std::round(nd(rng) * 4) / 4;
      t[i] = std::exp(s[i]) * 3 + 1;
      l[i] = rng() % 5 == 0;
    }
    l[0] = 1;
    CHECK(auc_pr(s, l) == auc_pr(t, l));
  }
}

TEST_CASE("window-end alignment") {
  auto a = align_window_scores(std::vector<double>{4, 5, 6}, 1, 3);
  CHECK(a.scores == std::vector<double>{4, 5, 6});
  CHECK(a.scored_mask == Labels{1, 1, 1});
  auto b = align_window_scores(std::vector<double>{7, 8, 9}, 3, 5);
  CHECK(b.scored_mask == Labels{0, 0, 1, 1, 1});
  CHECK(b.scores[2] == 7);
  CHECK(b.scores[4] == 9);
  CHECK_THROWS_AS(align_window_scores(std::vector<double>{1, 2, 3, 4}, 3, 5), Error);

  // Unscored leading timestamps are excluded, not zero-filled.
  auto m = evaluate(b, Labels{1, 1, 0, 1, 0});
  CHECK(m.n_scored == 3);
  CHECK(m.random_baseline == doctest::Approx(1.0 / 3.0));
  CHECK(m.auc_pr == testing::ap_oracle({7, 8, 9}, {0, 1, 0}));
}

TEST_CASE("random baseline and lift") {
  Labels l(10000, 0);
  for (int i = 0; i < 218; ++i) l[static_cast<std::size_t>(i * 37)] = 1;
  CHECK(std::round(random_baseline(l) * 1000) / 1000 == 0.022);
  CHECK(random_baseline(Labels{1, 1}) == 1.0);
  CHECK(random_baseline(Labels{0, 0}) == 0.0);
  CHECK(std::round(lift(0.064, 0.022) * 10) / 10 == 2.9);
  CHECK_THROWS_AS(lift(0.5, 0.0), Error);
}
