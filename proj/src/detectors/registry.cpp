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

#include <algorithm>

#include "builtin.hpp"
#include "tierbench/error.hpp"

namespace tierbench {

const std::vector<std::string>& builtin_methods() {
  static const std::vector<std::string> ids = {"hbos", "copod", "lof", "iforest", "pca"};
  return ids;
}

bool is_builtin_method(std::string_view id) {
  const auto& ids = builtin_methods();
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

std::unique_ptr<Detector> make_detector(std::string_view id) {
  if (id == "hbos") return detail::make_hbos();
  if (id == "copod") return detail::make_copod();
  if (id == "lof") return detail::make_lof();
  if (id == "iforest") return detail::make_iforest();
  if (id == "pca") return detail::make_pca();
  throw Error(ErrorKind::kUsage, "unknown method '" + std::string(id) + "'");
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace detail {

std::vector<double> fit_score(const Detector& detector, const TimeSeries& train,
                              const TimeSeries& test, const DetectorConfig& config,
                              std::uint64_t seed, ComputePool* pool) {
  if (pool) return detector.fit(train, config, seed, *pool)->score(test, *pool);
  ComputePool local(1);
  return detector.fit(train, config, seed, local)->score(test, local);
}

}  // namespace detail

std::vector<double> hbos_fit_score(const TimeSeries& train, const TimeSeries& test,
                                   std::int64_t n_bins, ComputePool* pool) {
  DetectorConfig cfg("hbos", {{"n_bins", n_bins, ScalingRole::kWork}});
  return detail::fit_score(*detail::make_hbos(), train, test, cfg, 0, pool);
}

std::vector<double> copod_fit_score(const TimeSeries& train, const TimeSeries& test,
                                    ComputePool* pool) {
  return detail::fit_score(*detail::make_copod(), train, test, DetectorConfig("copod", {}), 0, pool);
}

std::vector<double> lof_fit_score(const TimeSeries& train, const TimeSeries& test,
                                  std::int64_t n_neighbors, ComputePool* pool) {
  DetectorConfig cfg("lof", {{"n_neighbors", n_neighbors, ScalingRole::kWork}});
  return detail::fit_score(*detail::make_lof(), train, test, cfg, 0, pool);
}

std::vector<double> iforest_fit_score(const TimeSeries& train, const TimeSeries& test,
                                      std::int64_t n_estimators, std::int64_t max_samples,
                                      std::uint64_t seed, ComputePool* pool) {
  if (max_samples < 2) throw Error(ErrorKind::kConfig, "iforest: max_samples must be >= 2");
  DetectorConfig cfg("iforest", {{"n_estimators", n_estimators, ScalingRole::kWork},
                                 {"max_samples", max_samples, ScalingRole::kWork}});
  return detail::fit_score(*detail::make_iforest(), train, test, cfg, seed, pool);
}

std::vector<double> pca_fit_score(const TimeSeries& train, const TimeSeries& test,
                                  std::int64_t n_components, std::int64_t max_fit_rows,
                                  ComputePool* pool) {
  std::vector<Param> params = {{"n_components", n_components, ScalingRole::kWidth}};
  if (max_fit_rows > 0) params.push_back({"max_fit_rows", max_fit_rows, ScalingRole::kWork});
  return detail::fit_score(*detail::make_pca(), train, test, DetectorConfig("pca", params), 0, pool);
}

}  // namespace tierbench
