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

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "tierbench/record.hpp"

namespace tierbench {

struct ThroughputPoint {
  double wps_inference = 0.0;  // N / t_inf
  double wps_fullrun = 0.0;    // N / t_e2e
};

// Throws kData for failed records or non-positive timings.
ThroughputPoint throughput(const RunRecord& record);

// Inclusive: wps >= tau.
bool is_feasible(const ThroughputPoint& point, double tau);

const std::vector<double>& default_tau_grid();

struct FeasibilityCell {
  std::string method_id;
  std::string dataset_id;
  double tau = 0.0;
  std::size_t n_entities = 0;
  std::size_t n_covered = 0;
  double coverage = 0.0;
  std::optional<double> mean_best_auc_pr;  // nullopt when nothing is covered
  bool low_coverage = false;               // coverage < 0.5
};

struct FeasibilityReport {
  std::vector<FeasibilityCell> cells;  // sorted by (method, dataset), then tau as given
};

// Per entity, each measured configuration (tier + scaled parameters) gets its
// AUC-PR and inference wps averaged over seeds; the best AUC-PR among
// configurations with wps >= tau is that entity's value. Entities that appear
// only with failed runs count as uncovered. Throws kProtocolViolation when a
// method mixes window lengths within a dataset.
FeasibilityReport sweep(std::span<const RunRecord> records, std::span<const double> taus);

void write_feasibility_csv(const FeasibilityReport& report, std::ostream& out);

struct ParetoPoint {
  double wps = 0.0;
  double auc_pr = 0.0;
  std::size_t index = 0;  // caller's handle for the point
  std::string label;
};

// Drops strictly dominated points (both coordinates maximized); equal points
// survive together. Sorted by descending wps, then descending auc_pr, then index.
std::vector<ParetoPoint> pareto_front(std::vector<ParetoPoint> points);

// Front over successful records that share one tier; throws kUsage on mixed tiers.
std::vector<RunRecord> pareto_front(std::span<const RunRecord> records);

// One point per (method, dataset) at a tier: mean AUC-PR and median inference
// wps over that tier's successful records.
std::vector<ParetoPoint> method_points(std::span<const RunRecord> records, const std::string& tier_id);

void write_pareto_csv(const std::vector<ParetoPoint>& all_points, const std::vector<ParetoPoint>& front,
                      std::ostream& out);

struct FitOverhead {
  double ratio = 1.0;       // wps_inference / wps_fullrun = t_e2e / t_inf
  bool informative = true;  // false for E2E_FALLBACK records, where the ratio is 1 by construction
};

FitOverhead fit_overhead_ratio(const RunRecord& record);
double fit_overhead_ratio(double wps_inference, double wps_fullrun);

// Linear interpolation between order statistics at h = (n - 1) p.
double quantile(std::vector<double> values, double p);

struct QuantileSummary {
  double p10 = 0.0;
  double p50 = 0.0;
  double p90 = 0.0;
};

QuantileSummary quantiles(std::span<const double> values);

inline constexpr const char* kQuantileEstimator = "linear_interpolation_h=(n-1)p";

}  // namespace tierbench
