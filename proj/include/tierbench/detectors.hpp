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

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "tierbench/compute_pool.hpp"
#include "tierbench/data.hpp"
#include "tierbench/ladder.hpp"

namespace tierbench {

// A fitted detector. Immutable after fit; score() may be called concurrently.
// Higher score means more anomalous.
class Model {
 public:
  virtual ~Model() = default;
  // One score per scored unit (window_count of the test length).
  virtual std::vector<double> score(const TimeSeries& test, ComputePool& pool) const = 0;
};

// Fit/score contract shared by every detector. Given identical inputs the
// scores are bit-identical regardless of pool width.
class Detector {
 public:
  virtual ~Detector() = default;
  virtual std::string_view id() const = 0;
  // Base (reference-tier) hyperparameters for data with `n_features` columns.
  virtual DetectorConfig default_config(std::size_t n_features) const = 0;
  virtual WindowingSpec windowing(const DetectorConfig&) const { return WindowingSpec::pointwise(); }
  virtual std::unique_ptr<Model> fit(const TimeSeries& train, const DetectorConfig& config,
                                     std::uint64_t seed, ComputePool& pool) const = 0;
};

// Built-in ids: hbos, copod, lof, iforest, pca.
const std::vector<std::string>& builtin_methods();
bool is_builtin_method(std::string_view id);
// Throws kUsage for unknown ids.
std::unique_ptr<Detector> make_detector(std::string_view id);

// One-shot helpers. A null pool runs single-threaded.

// Equal-width histograms over the train range, +1 smoothed densities;
// out-of-range values fall in the nearest edge bin; constant features add 0.
std::vector<double> hbos_fit_score(const TimeSeries& train, const TimeSeries& test,
                                   std::int64_t n_bins, ComputePool* pool = nullptr);

// Empirical-copula tail probabilities; tails clamped at 1/(T_train + 1).
std::vector<double> copod_fit_score(const TimeSeries& train, const TimeSeries& test,
                                    ComputePool* pool = nullptr);

// Exact Euclidean k-NN local outlier factor of each test point against train.
std::vector<double> lof_fit_score(const TimeSeries& train, const TimeSeries& test,
                                  std::int64_t n_neighbors, ComputePool* pool = nullptr);

// Isolation forest; scores in (0,1). Tree t is grown from its own seed derived
// from (seed, t), so results do not depend on build parallelism.
std::vector<double> iforest_fit_score(const TimeSeries& train, const TimeSeries& test,
                                      std::int64_t n_estimators, std::int64_t max_samples,
                                      std::uint64_t seed, ComputePool* pool = nullptr);

// Squared reconstruction error of standardized rows using the top
// n_components principal axes. max_fit_rows = 0 fits on every train row,
// otherwise on an evenly strided subset of at most that many rows.
std::vector<double> pca_fit_score(const TimeSeries& train, const TimeSeries& test,
                                  std::int64_t n_components, std::int64_t max_fit_rows = 0,
                                  ComputePool* pool = nullptr);

// splitmix64 finalizer over (seed, stream); used for per-tree seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace tierbench
