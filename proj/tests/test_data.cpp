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
#include <fstream>

#include "support.hpp"
#include "tierbench/data.hpp"
#include "tierbench/error.hpp"

using namespace tierbench;
using tierbench::testing::TempDir;

namespace {

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::kUsage;
}

LabeledSeries ramp(std::size_t n) {
  std::vector<double> v(n);
  std::vector<std::uint8_t> l(n, 0);
  for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<double>(i);
  l[n - 1] = 1;
  return LabeledSeries(TimeSeries(n, 1, v), l);
}

}  // namespace

TEST_CASE("time series rejects bad shapes and non-finite values") {
  CHECK(kind_of([] { TimeSeries(2, 2, {1, 2, 3}); }) == ErrorKind::kStructural);
  CHECK(kind_of([] { TimeSeries(1, 0, {}); }) == ErrorKind::kStructural);
  CHECK(kind_of([] { TimeSeries(1, 2, {1, std::nan("")}); }) == ErrorKind::kData);
  TimeSeries ts(2, 2, {1, 2, 3, 4});
  CHECK(ts.at(1, 0) == 3);
  CHECK(ts.column(1) == std::vector<double>{2, 4});
  CHECK(ts.slice(1, 1).rows() == 0);
  CHECK(ts.slice(1, 1).cols() == 2);
}

TEST_CASE("csv loading") {
  TempDir dir;
  SUBCASE("crlf and trailing blank lines") {
    write_file(dir / "a.csv", "x,y\r\n1.5,2\r\n-3,4e2\r\n\r\n");
    auto ts = load_csv(dir / "a.csv", true);
    CHECK(ts.rows() == 2);
    CHECK(ts.at(1, 1) == 400.0);
  }
  SUBCASE("ragged row names the line") {
    write_file(dir / "b.csv", "1,2\n3\n");
    try {
      load_csv(dir / "b.csv", false);
      FAIL("expected error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kStructural);
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }
  SUBCASE("bad cell") {
    write_file(dir / "c.csv", "1,2\n3,abc\n");
    CHECK(kind_of([&] { load_csv(dir / "c.csv", false); }) == ErrorKind::kParse);
  }
  SUBCASE("missing file") { CHECK(kind_of([&] { load_csv(dir / "nope.csv", false); }) == ErrorKind::kData); }
  SUBCASE("round trip through the shortest decimal form") {
    TimeSeries ts(2, 3, {0.1, 1e-300, -2.5, 1.0 / 3.0, 12345678.9, 0});
    write_csv(ts, dir / "rt.csv");
    CHECK(load_csv(dir / "rt.csv", false) == ts);
  }
}

TEST_CASE("smd-style data plus labels") {
  TempDir dir;
  write_file(dir / "d.txt", "0.1,0.2\n0.3,0.9\n");
  write_file(dir / "l.txt", "0\n1\n");
  auto ls = load_smd(dir / "d.txt", dir / "l.txt");
  CHECK(ls.size() == 2);
  CHECK(ls.series().cols() == 2);
  CHECK(ls.anomaly_rate() == 0.5);

  write_file(dir / "l3.txt", "0\n1\n0\n");
  CHECK(kind_of([&] { load_smd(dir / "d.txt", dir / "l3.txt"); }) == ErrorKind::kStructural);

  write_file(dir / "l2.txt", "0\n2\n");
  try {
    load_smd(dir / "d.txt", dir / "l2.txt");
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kParse);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("labeled csv keeps the last column as labels") {
  TempDir dir;
  write_file(dir / "e.csv", "1,2,0\n3,4,1\n5,6,0\n");
  auto ls = load_labeled_csv(dir / "e.csv", false);
  CHECK(ls.series().cols() == 2);
  CHECK(ls.labels() == std::vector<std::uint8_t>{0, 1, 0});
}

TEST_CASE("contiguous split geometry") {
  SUBCASE("floor sizes with the remainder in test") {
    auto s = split_contiguous(ramp(10), 0.5, 0.0);
    CHECK(s.train.rows() == 5);
    CHECK(s.val.rows() == 0);
    CHECK(s.test.size() == 5);
    CHECK(s.train.at(4, 0) == 4.0);
    CHECK(s.test.series().at(0, 0) == 5.0);
  }
  SUBCASE("segments tile the series exactly once") {
    for (std::size_t n : {11u, 97u, 1000u}) {
      for (double tf : {0.3, 0.5, 0.77}) {
        for (double vf : {0.0, 0.1, 0.4}) {
          const auto fit = static_cast<std::size_t>(std::floor(tf * static_cast<double>(n)));
          if (vf > 0.0 && std::floor(vf * static_cast<double>(fit)) == 0.0) {
            CHECK(kind_of([&] { split_contiguous(ramp(n), tf, vf); }) == ErrorKind::kInvalidSplit);
            continue;
          }
          auto s = split_contiguous(ramp(n), tf, vf);
          std::vector<double> joined;
          for (const TimeSeries* part : std::initializer_list<const TimeSeries*>{&s.train, &s.val, &s.test.series()}) {
            for (std::size_t i = 0; i < part->rows(); ++i) joined.push_back(part->at(i, 0));
          }
          REQUIRE(joined.size() == n);
          for (std::size_t i = 0; i < n; ++i) CHECK(joined[i] == static_cast<double>(i));
          CHECK(s.val_begin == s.train.rows());
          CHECK(s.test_begin == s.train.rows() + s.val.rows());
        }
      }
    }
  }
  SUBCASE("empty segments are rejected") {
    CHECK(kind_of([] { split_contiguous(ramp(4), 0.25, 0.9); }) == ErrorKind::kInvalidSplit);
    CHECK(kind_of([] { split_contiguous(ramp(10), 0.5, 0.1); }) == ErrorKind::kInvalidSplit);
    CHECK(kind_of([] { split_contiguous(ramp(10), 1.0, 0.0); }) == ErrorKind::kInvalidSplit);
  }
}

TEST_CASE("window count") {
  CHECK(window_count(1000, WindowingSpec::sliding(100)) == 901);
  CHECK(window_count(1000, WindowingSpec::pointwise()) == 1000);
  CHECK(window_count(8, WindowingSpec::sliding(8)) == 1);
  CHECK(kind_of([] { window_count(7, WindowingSpec::sliding(8)); }) == ErrorKind::kInvalidWindow);
}

TEST_CASE("synthetic generator") {
  SyntheticOptions o{4000, 4, 0.02, 7};
  auto a = generate_synthetic(o);
  auto b = generate_synthetic(o);
  CHECK(a == b);
  CHECK(a.anomaly_rate() >= 0.015);
  CHECK(a.anomaly_rate() <= 0.025);

  SUBCASE("realized rate within one sample per interval of the target") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      for (double rate : {0.005, 0.02, 0.1, 0.3}) {
        SyntheticOptions p{1000 + 37 * seed, 1 + seed % 5, rate, seed};
        auto ls = generate_synthetic(p);
        std::size_t intervals = 0, positives = 0;
        for (std::size_t t = 0; t < ls.size(); ++t) {
          positives += ls.labels()[t];
          if (ls.labels()[t] && (t == 0 || !ls.labels()[t - 1])) ++intervals;
        }
        const double T = static_cast<double>(ls.size());
        CHECK(std::abs(positives / T - rate) <= static_cast<double>(intervals) / T);
      }
    }
  }
  SUBCASE("labelled rows carry the injected offsets") {
    // Labelled rows move by 4 or 8 sigma on top of noise; the rest is noise only.
    auto truth = synthetic_truth(o);
    double in_sum = 0.0, out_sum = 0.0;
    std::size_t in_n = 0, out_n = 0;
    for (std::size_t t = 0; t < a.size(); ++t) {
      double worst = 0.0;
      for (std::size_t j = 0; j < 4; ++j) {
        worst = std::max(worst, std::abs(a.series().at(t, j) - truth.clean.at(t, j)));
      }
      if (a.labels()[t]) {
        in_sum += worst;
        ++in_n;
      } else {
        out_sum += worst;
        ++out_n;
      }
    }
    CHECK(in_sum / static_cast<double>(in_n) > 4.0 * truth.noise_sigma);
    CHECK(out_sum / static_cast<double>(out_n) < 2.0 * truth.noise_sigma);
  }
  CHECK(kind_of([] { generate_synthetic({4000, 4, 0.6, 1}); }) == ErrorKind::kConfig);
  CHECK(kind_of([] { generate_synthetic({99, 4, 0.02, 1}); }) == ErrorKind::kConfig);
}
