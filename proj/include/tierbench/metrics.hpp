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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace tierbench {

// Scores placed on the timestamp axis; unscored timestamps (window warm-up)
// have mask 0 and are excluded from every metric.
struct AlignedScores {
  std::vector<double> scores;
  std::vector<std::uint8_t> scored_mask;
};

// Window i's score lands on timestamp i + w - 1.
AlignedScores align_window_scores(std::span<const double> window_scores, std::size_t window_length,
                                  std::size_t length);

// Average precision with unique-threshold step integration. Tied scores enter
// together. Throws kUndefinedMetric without positives; 1.0 without negatives.
double auc_pr(std::span<const double> scores, std::span<const std::uint8_t> labels);

// Anomaly rate of the span (the expected AP of a random scorer).
double random_baseline(std::span<const std::uint8_t> labels);

struct MetricsResult {
  double auc_pr = 0.0;
  double random_baseline = 0.0;
  std::size_t n_scored = 0;
};

// Metrics over timestamps that carry both a score and a label.
// auc_pr / pi; throws kUndefinedMetric when pi is not positive.
double lift(double auc_pr, double baseline);

MetricsResult evaluate(const AlignedScores& aligned, std::span<const std::uint8_t> labels);

}  // namespace tierbench
