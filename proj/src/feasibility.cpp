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

#include "tierbench/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "tierbench/error.hpp"

namespace tierbench {

ThroughputPoint throughput(const RunRecord& record) {
  const std::string who = record.method_id + "/" + record.dataset_id + "/" + record.entity_id + "/" +
                          record.tier.id + "/seed=" + std::to_string(record.seed);
  if (!record.ok()) throw Error(ErrorKind::kData, "no throughput for failed run " + who);
  const double t_inf = record.timing.t_inf();
  const double t_e2e = record.timing.total_time_s;
  if (!(t_inf > 0.0) || !(t_e2e > 0.0)) {
    throw Error(ErrorKind::kData, "non-positive timing in run " + who);
  }
  const auto n = static_cast<double>(record.n_scored_units);
  return {n / t_inf, n / t_e2e};
}

bool is_feasible(const ThroughputPoint& point, double tau) { return point.wps_inference >= tau; }

const std::vector<double>& default_tau_grid() {
  static const std::vector<double> grid = {50, 100, 200, 500, 1000, 2000, 5000, 1e4, 1e5};
  return grid;
}

namespace {

std::string config_key(const RunRecord& r) {
  std::string key = r.tier.id;
  for (const auto& p : r.scaled_config.params()) key += "|" + p.name + "=" + std::to_string(p.value);
  return key;
}

struct ConfigMeasure {
  double auc_sum = 0.0;
  double wps_sum = 0.0;
  std::size_t seeds = 0;
};

}  // namespace

FeasibilityReport sweep(std::span<const RunRecord> records, std::span<const double> taus) {
  for (double tau : taus) {
    if (!(tau > 0.0)) throw Error(ErrorKind::kUsage, "tau must be > 0");
  }
  using Group = std::pair<std::string, std::string>;  // (method, dataset)
  std::map<Group, std::set<std::string>> entities;
  std::map<Group, std::map<std::string, std::map<std::string, ConfigMeasure>>> measured;
  std::map<Group, std::pair<std::size_t, const RunRecord*>> window;

  for (const auto& r : records) {
    const Group g{r.method_id, r.dataset_id};
    entities[g].insert(r.entity_id);
    if (!r.ok()) continue;
    auto [it, fresh] = window.try_emplace(g, r.window_length, &r);
    if (!fresh && it->second.first != r.window_length) {
      const RunRecord& first = *it->second.second;
      throw Error(ErrorKind::kProtocolViolation,
                  "window-freeze breach for " + r.method_id + " on " + r.dataset_id + ": w=" +
                      std::to_string(first.window_length) + " (" + first.entity_id + "/" + first.tier.id +
                      "/seed=" + std::to_string(first.seed) + ") vs w=" + std::to_string(r.window_length) +
                      " (" + r.entity_id + "/" + r.tier.id + "/seed=" + std::to_string(r.seed) + ")");
    }
    auto& m = measured[g][r.entity_id][config_key(r)];
    m.auc_sum += *r.auc_pr;
    m.wps_sum += throughput(r).wps_inference;
    ++m.seeds;
  }

  FeasibilityReport report;
  for (const auto& [group, names] : entities) {
    for (double tau : taus) {
      FeasibilityCell cell;
      cell.method_id = group.first;
      cell.dataset_id = group.second;
      cell.tau = tau;
      cell.n_entities = names.size();
      double best_sum = 0.0;
      for (const auto& entity : names) {
        std::optional<double> best;
        auto eit = measured[group].find(entity);
        if (eit == measured[group].end()) continue;
        for (const auto& [key, m] : eit->second) {
          const double seeds = static_cast<double>(m.seeds);
          if (m.wps_sum / seeds < tau) continue;
          const double auc = m.auc_sum / seeds;
          if (!best || auc > *best) best = auc;
        }
        if (best) {
          ++cell.n_covered;
          best_sum += *best;
        }
      }
      cell.coverage = static_cast<double>(cell.n_covered) / static_cast<double>(cell.n_entities);
      if (cell.n_covered > 0) cell.mean_best_auc_pr = best_sum / static_cast<double>(cell.n_covered);
      cell.low_coverage = cell.coverage < 0.5;
      report.cells.push_back(std::move(cell));
    }
  }
  return report;
}

namespace {

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(10) << v;
  return s.str();
}

}  // namespace

void write_feasibility_csv(const FeasibilityReport& report, std::ostream& out) {
  out << "method,dataset,tau,n_entities,n_covered,coverage,mean_best_auc_pr,low_coverage_flag\n";
  for (const auto& c : report.cells) {
    out << c.method_id << ',' << c.dataset_id << ',' << fmt(c.tau) << ',' << c.n_entities << ','
        << c.n_covered << ',' << fmt(c.coverage) << ','
        << (c.mean_best_auc_pr ? fmt(*c.mean_best_auc_pr) : std::string("infeasible")) << ','
        << (c.low_coverage ? "true" : "false") << '\n';
  }
}

std::vector<ParetoPoint> pareto_front(std::vector<ParetoPoint> points) {
  std::sort(points.begin(), points.end(), [](const ParetoPoint& a, const ParetoPoint& b) {
    if (a.wps != b.wps) return a.wps > b.wps;
    if (a.auc_pr != b.auc_pr) return a.auc_pr > b.auc_pr;
    return a.index < b.index;
  });
  std::vector<ParetoPoint> front;
  // In this order a point is strictly dominated iff some earlier point has a
  // strictly higher auc_pr, or the same auc_pr with a strictly higher wps.
  for (const auto& p : points) {
    bool dominated = false;
    for (const auto& q : front) {
      if (q.wps >= p.wps && q.auc_pr >= p.auc_pr && (q.wps > p.wps || q.auc_pr > p.auc_pr)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) front.push_back(p);
  }
  return front;
}

std::vector<RunRecord> pareto_front(std::span<const RunRecord> records) {
  std::vector<ParetoPoint> points;
  std::optional<std::string> tier;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (tier && *tier != r.tier.id) throw Error(ErrorKind::kUsage, "pareto front needs records from one tier");
    tier = r.tier.id;
    if (!r.ok()) continue;
    points.push_back({throughput(r).wps_inference, *r.auc_pr, i, r.method_id});
  }
  std::vector<RunRecord> out;
  for (const auto& p : pareto_front(std::move(points))) out.push_back(records[p.index]);
  return out;
}

std::vector<ParetoPoint> method_points(std::span<const RunRecord> records, const std::string& tier_id) {
  std::map<std::pair<std::string, std::string>, std::pair<std::vector<double>, std::vector<double>>> groups;
  for (const auto& r : records) {
    if (r.tier.id != tier_id || !r.ok()) continue;
    auto& g = groups[{r.method_id, r.dataset_id}];
    g.first.push_back(throughput(r).wps_inference);
    g.second.push_back(*r.auc_pr);
  }
  std::vector<ParetoPoint> points;
  for (const auto& [key, g] : groups) {
    double auc = 0.0;
    for (double a : g.second) auc += a;
    auc /= static_cast<double>(g.second.size());
    points.push_back({quantile(g.first, 0.5), auc, points.size(), key.first + "@" + key.second});
  }
  return points;
}

void write_pareto_csv(const std::vector<ParetoPoint>& all_points, const std::vector<ParetoPoint>& front,
                      std::ostream& out) {
  std::set<std::size_t> on_front;
  for (const auto& p : front) on_front.insert(p.index);
  auto sorted = all_points;
  std::sort(sorted.begin(), sorted.end(), [](const ParetoPoint& a, const ParetoPoint& b) {
    if (a.wps != b.wps) return a.wps > b.wps;
    return a.index < b.index;
  });
  out << "label,median_wps_inference,mean_auc_pr,on_front\n";
  for (const auto& p : sorted) {
    out << p.label << ',' << fmt(p.wps) << ',' << fmt(p.auc_pr) << ','
        << (on_front.count(p.index) ? "true" : "false") << '\n';
  }
}

FitOverhead fit_overhead_ratio(const RunRecord& record) {
  if (record.timing.t_inf_source == TInfSource::kE2eFallback) return {1.0, false};
  const auto tp = throughput(record);
  return {fit_overhead_ratio(tp.wps_inference, tp.wps_fullrun), true};
}

double fit_overhead_ratio(double wps_inference, double wps_fullrun) {
  if (!(wps_inference > 0.0) || !(wps_fullrun > 0.0)) throw Error(ErrorKind::kData, "throughput must be > 0");
  return wps_inference / wps_fullrun;
}

double quantile(std::vector<double> values, double p) {
  if (values.empty()) throw Error(ErrorKind::kData, "quantile of empty set");
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::kUsage, "quantile level must lie in [0,1]");
  std::sort(values.begin(), values.end());
  const double h = static_cast<double>(values.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

QuantileSummary quantiles(std::span<const double> values) {
  std::vector<double> v(values.begin(), values.end());
  return {quantile(v, 0.10), quantile(v, 0.50), quantile(v, 0.90)};
}

}  // namespace tierbench
