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

#include <memory>

#include "tierbench/detectors.hpp"

namespace tierbench::detail {

std::unique_ptr<Detector> make_hbos();
std::unique_ptr<Detector> make_copod();
std::unique_ptr<Detector> make_lof();
std::unique_ptr<Detector> make_iforest();
std::unique_ptr<Detector> make_pca();

// Runs fit then score on a temporary pool when none is supplied.
std::vector<double> fit_score(const Detector& detector, const TimeSeries& train,
                              const TimeSeries& test, const DetectorConfig& config,
                              std::uint64_t seed, ComputePool* pool);

}  // namespace tierbench::detail
