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

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "support.hpp"
#include "tierbench/error.hpp"
#include "tierbench/feasibility.hpp"

using namespace tierbench;
using tierbench::testing::fake_record;

namespace {

std::vector<ParetoPoint> points(const std::vector<std::pair<double, double>>& xy) {
  std::vector<ParetoPoint> out;
  for (std::size_t i = 0; i < xy.size(); ++i) out.push_back({xy[i].first, xy[i].second, i, ""});
  return out;
}

}  // namespace

TEST_CASE("throughput") {
  auto r = fake_record("m", "d", "e", "REF", 10, 0, 9010, 0.5, 901);
  r.timing.infer_time_s = 0.1;
  CHECK(throughput(r).wps_inference == doctest::Approx(9010).epsilon(1e-12));
  CHECK(throughput(r).wps_fullrun < throughput(r).wps_inference);

  r.timing.t_inf_source = TInfSource::kE2eFallback;
  CHECK(throughput(r).wps_inference == throughput(r).wps_fullrun);

  r.timing.t_inf_source = TInfSource::kInstrumented;
  r.timing.infer_time_s = 0.0;
  try {
    throughput(r);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kData);
    CHECK(std::string(e.what()).find("m/d/e/REF") != std::string::npos);
  }
}

TEST_CASE("feasibility is inclusive") {
  CHECK(is_feasible({4199, 4000}, 500));
  CHECK_FALSE(is_feasible({4199, 4000}, 5000));
  CHECK(is_feasible({500, 400}, 500));
  CHECK(default_tau_grid().size() == 9);
}

TEST_CASE("sweep examples") {
  SUBCASE("best feasible, not best overall") {
    std::vector<RunRecord> rs = {fake_record("m", "d", "e", "A", 10, 0, 600, 0.30),
                                 fake_record("m", "d", "e", "B", 20, 0, 400, 0.50)};
    auto rep = sweep(rs, std::vector<double>{500});
    REQUIRE(rep.cells.size() == 1);
    CHECK(rep.cells[0].mean_best_auc_pr == doctest::Approx(0.30));
  }
  SUBCASE("coverage fraction") {
    std::vector<RunRecord> rs = {fake_record("m", "d", "e1", "A", 10, 0, 900, 0.4),
                                 fake_record("m", "d", "e2", "A", 10, 0, 800, 0.6),
                                 fake_record("m", "d", "e3", "A", 10, 0, 100, 0.9)};
    auto rep = sweep(rs, std::vector<double>{500});
    CHECK(rep.cells[0].coverage == doctest::Approx(2.0 / 3.0));
    CHECK(rep.cells[0].mean_best_auc_pr == doctest::Approx(0.5));
    CHECK_FALSE(rep.cells[0].low_coverage);
  }
  SUBCASE("nothing feasible renders as infeasible") {
    std::vector<RunRecord> rs = {fake_record("m", "d", "e", "A", 10, 0, 100, 0.4)};
    auto rep = sweep(rs, std::vector<double>{500});
    CHECK(rep.cells[0].coverage == 0.0);
    CHECK_FALSE(rep.cells[0].mean_best_auc_pr);
    CHECK(rep.cells[0].low_coverage);
    std::ostringstream csv;
    write_feasibility_csv(rep, csv);
    CHECK(csv.str() ==
          "method,dataset,tau,n_entities,n_covered,coverage,mean_best_auc_pr,low_coverage_flag\n"
          "m,d,500,1,0,0,infeasible,true\n");
  }
  SUBCASE("seeds are averaged before the max") {
    std::vector<RunRecord> rs = {fake_record("m", "d", "e", "A", 10, 0, 600, 0.2),
                                 fake_record("m", "d", "e", "A", 10, 1, 380, 0.4)};
    CHECK(sweep(rs, std::vector<double>{490}).cells[0].mean_best_auc_pr == doctest::Approx(0.3));
    CHECK(sweep(rs, std::vector<double>{491}).cells[0].n_covered == 0);
  }
  SUBCASE("entities with only failed runs count against coverage") {
    auto bad = fake_record("m", "d", "e2", "A", 10, 0, 600, 0.2);
    bad.status = RunStatus::kFailed;
    bad.auc_pr.reset();
    std::vector<RunRecord> rs = {fake_record("m", "d", "e1", "A", 10, 0, 600, 0.2), bad};
    CHECK(sweep(rs, std::vector<double>{100}).cells[0].coverage == 0.5);
  }
  SUBCASE("window-freeze breach names both records") {
    std::vector<RunRecord> rs = {fake_record("m", "d", "e1", "A", 10, 0, 600, 0.2, 1000, 64),
                                 fake_record("m", "d", "e2", "B", 10, 0, 600, 0.2, 1000, 32)};
    try {
      sweep(rs, std::vector<double>{100});
      FAIL("expected error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kProtocolViolation);
      const std::string msg = e.what();
      CHECK(msg.find("e1/A") != std::string::npos);
      CHECK(msg.find("e2/B") != std::string::npos);
    }
  }
}

TEST_CASE("sweep matches exhaustive enumeration") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<RunRecord> rs;
    std::vector<testing::SweepRun> flat;
    const std::size_t n = 1 + rng() % 100;
    for (std::size_t i = 0; i < n; ++i) {
      const std::string m = "m" + std::to_string(rng() % 2);
      const std::string d = "d" + std::to_string(rng() % 2);
      const std::string e = "e" + std::to_string(rng() % 4);
      const std::string tier = "t" + std::to_string(rng() % 3);
      const std::int64_t work = 1 + static_cast<std::int64_t>(rng() % 2);
      const double wps = std::exp2(4.0 + static_cast<double>(rng() % 100) / 10.0);
      const double auc = static_cast<double>(rng() % 1000) / 1000.0;
      auto r = fake_record(m, d, e, tier, work, rng() % 2, wps, auc);
      const double point_wps = throughput(r).wps_inference;
      const bool ok = rng() % 10 != 0;
      if (!ok) {
        r.status = RunStatus::kFailed;
        r.auc_pr.reset();
      }
      rs.push_back(r);
      flat.push_back({m, d, e, tier + "/" + std::to_string(work), point_wps, auc, ok});
      if (!ok) flat.back().wps = 0;
    }
    std::vector<double> taus = {50, 100, 200, 500, 1000, 5000, 1e4, 1e5};
    auto rep = sweep(rs, taus);
    auto want = testing::sweep_oracle(flat, taus);
    REQUIRE(rep.cells.size() == want.size());
    for (const auto& c : rep.cells) {
      const auto& w = want.at({c.method_id, c.dataset_id, c.tau});
      CHECK(c.n_entities == w.n_entities);
      CHECK(c.n_covered == w.n_covered);
      CHECK(c.mean_best_auc_pr.has_value() == w.mean_best.has_value());
      if (w.mean_best) CHECK(std::abs(*c.mean_best_auc_pr - *w.mean_best) < 1e-12);
    }
    for (std::size_t i = 1; i < rep.cells.size(); ++i) {
      const auto& a = rep.cells[i - 1];
      const auto& b = rep.cells[i];
      if (a.method_id == b.method_id && a.dataset_id == b.dataset_id) CHECK(b.coverage <= a.coverage);
    }
  }
}

TEST_CASE("pareto front") {
  CHECK(pareto_front(points({{10, 0.9}, {20, 0.5}, {5, 0.95}})).size() == 3);
  auto two = pareto_front(points({{10, 0.9}, {9, 0.8}}));
  REQUIRE(two.size() == 1);
  CHECK(two[0].index == 0);
  CHECK(pareto_front(points({{1, 1}})).size() == 1);
  auto ties = pareto_front(points({{5, 0.5}, {5, 0.5}, {5, 0.4}}));
  CHECK(ties.size() == 2);
  auto sorted = pareto_front(points({{5, 0.95}, {20, 0.5}, {10, 0.9}}));
  CHECK(sorted[0].wps == 20);
  CHECK(sorted[2].wps == 5);

  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::pair<double, double>> xy(1 + rng() % 40);
    for (auto& p : xy) p = {static_cast<double>(rng() % 10), static_cast<double>(rng() % 10) / 10};
    auto front = pareto_front(points(xy));
    std::set<std::size_t> got;
    for (const auto& p : front) got.insert(p.index);
    CHECK(got == testing::pareto_oracle(xy));
    auto again = pareto_front(front);
    CHECK(again.size() == front.size());
    for (std::size_t i = 0; i < front.size(); ++i) CHECK(again[i].index == front[i].index);
  }

  std::vector<RunRecord> rs = {fake_record("a", "d", "e", "T", 10, 0, 100, 0.9),
                               fake_record("b", "d", "e", "T", 10, 0, 90, 0.8)};
  auto fr = pareto_front(std::span<const RunRecord>(rs));
  REQUIRE(fr.size() == 1);
  CHECK(fr[0].method_id == "a");
  rs.push_back(fake_record("c", "d", "e", "U", 10, 0, 90, 0.8));
  CHECK_THROWS_AS(pareto_front(std::span<const RunRecord>(rs)), Error);
}

TEST_CASE("fit overhead ratio") {
  CHECK(std::round(fit_overhead_ratio(18000, 780) * 100) / 100 == 23.08);
  CHECK(std::round(fit_overhead_ratio(19148, 347) * 100) / 100 == 55.18);
}

TEST_CASE("quantiles") {
  std::vector<double> v(22);
  for (int i = 0; i < 22; ++i) v[i] = i + 1;
  CHECK(quantile(v, 0.5) == 11.5);
  auto one = quantiles(std::vector<double>{3.0});
  CHECK(one.p10 == 3.0);
  CHECK(one.p50 == 3.0);
  CHECK(one.p90 == 3.0);
  CHECK(quantile({0, 10}, 0.1) == doctest::Approx(1.0));
  CHECK(quantile({5, 1, 3}, 0.5) == 3.0);
  CHECK_THROWS_AS(quantile({}, 0.5), Error);
}
