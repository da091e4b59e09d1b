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

#pragma once

// Brute-force reference implementations used as test oracles. They follow the
// textbook definitions directly and share no code with the library.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace tierbench::testing {

// Average precision by enumerating every distinct threshold t and counting
// TP/FP among scores >= t from scratch.
inline double ap_oracle(const std::vector<double>& scores, const std::vector<std::uint8_t>& labels) {
  std::set<double, std::greater<>> thresholds(scores.begin(), scores.end());
  double positives = 0;
  for (auto l : labels) positives += l;
  double ap = 0.0, prev_recall = 0.0;
  for (double t : thresholds) {
    double tp = 0, fp = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      if (scores[i] >= t) (labels[i] ? tp : fp) += 1;
    }
    const double recall = tp / positives;
    ap += (recall - prev_recall) * (tp / (tp + fp));
    prev_recall = recall;
  }
  return ap;
}

// A flattened run for the sweep oracle.
struct SweepRun {
  std::string method, dataset, entity, config;
  double wps = 0.0;
  double auc = 0.0;
  bool ok = true;
};

struct SweepCell {
  std::size_t n_entities = 0;
  std::size_t n_covered = 0;
  std::optional<double> mean_best;
};

// For each (method, dataset, tau): enumerate every entity and every config,
// average over that config's runs, keep the best feasible AUC.
inline std::map<std::tuple<std::string, std::string, double>, SweepCell> sweep_oracle(
    const std::vector<SweepRun>& runs, const std::vector<double>& taus) {
  std::set<std::pair<std::string, std::string>> groups;
  for (const auto& r : runs) groups.insert({r.method, r.dataset});
  std::map<std::tuple<std::string, std::string, double>, SweepCell> out;
  for (const auto& [m, d] : groups) {
    std::set<std::string> entities, configs;
    for (const auto& r : runs) {
      if (r.method != m || r.dataset != d) continue;
      entities.insert(r.entity);
      configs.insert(r.config);
    }
    for (double tau : taus) {
      SweepCell cell;
      cell.n_entities = entities.size();
      double sum = 0.0;
      for (const auto& e : entities) {
        std::optional<double> best;
        for (const auto& c : configs) {
          double wps = 0, auc = 0, n = 0;
          for (const auto& r : runs) {
            if (r.method == m && r.dataset == d && r.entity == e && r.config == c && r.ok) {
              wps += r.wps;
              auc += r.auc;
              n += 1;
            }
          }
          if (n == 0) continue;
          if (wps / n >= tau && (!best || auc / n > *best)) best = auc / n;
        }
        if (best) {
          ++cell.n_covered;
          sum += *best;
        }
      }
      if (cell.n_covered) cell.mean_best = sum / static_cast<double>(cell.n_covered);
      out[{m, d, tau}] = cell;
    }
  }
  return out;
}

// Indices of points no other point strictly dominates (>= on both, > on one).
inline std::set<std::size_t> pareto_oracle(const std::vector<std::pair<double, double>>& pts) {
  std::set<std::size_t> keep;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < pts.size() && !dominated; ++j) {
      dominated = pts[j].first >= pts[i].first && pts[j].second >= pts[i].second &&
                  (pts[j].first > pts[i].first || pts[j].second > pts[i].second);
    }
    if (!dominated) keep.insert(i);
  }
  return keep;
}

}  // namespace tierbench::testing
