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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "tierbench/ladder.hpp"

namespace tierbench {

using Json = nlohmann::ordered_json;

// Version written by this build. Version 1 lacks the "conventions" block.
inline constexpr int kSchemaVersion = 2;
inline constexpr int kOldestSchemaVersion = 1;

enum class TInfSource { kInstrumented, kE2eFallback };
enum class RunStatus { kOk, kFailed };

std::string_view to_string(TInfSource source);
std::string_view to_string(RunStatus status);

struct TimingRecord {
  double fit_time_s = 0.0;
  std::optional<double> infer_time_s;
  double total_time_s = 0.0;
  TInfSource t_inf_source = TInfSource::kE2eFallback;
  bool warmup = false;
  // Phase timings reported by an external adapter; informational only.
  std::optional<double> reported_fit_time_s;
  std::optional<double> reported_infer_time_s;

  // Scoring-only time when instrumented, full-run time otherwise.
  double t_inf() const {
    return t_inf_source == TInfSource::kInstrumented && infer_time_s ? *infer_time_s : total_time_s;
  }
};

// Estimator conventions stamped into every record so analyses built on
// different conventions are detectable.
struct Conventions {
  std::string rounding = "half_away_from_zero";
  std::string ap_estimator = "step_unique_threshold";
  std::string feasibility = "inclusive_ge";
};

struct RunRecord {
  int schema_version = kSchemaVersion;
  RunStatus status = RunStatus::kOk;
  std::string failure_reason;
  std::string method_id;
  std::string dataset_id;
  std::string entity_id;
  TierSpec tier;
  std::uint64_t seed = 0;
  DetectorConfig base_config;
  DetectorConfig scaled_config;
  ConfigDiff diff;
  std::optional<int> thread_cap_applied;
  std::string thread_cap_note;
  TimingRecord timing;
  std::size_t n_scored_units = 0;  // N
  std::size_t length = 0;          // T of the scored span
  std::size_t window_length = 1;   // w
  bool windowed = false;
  std::optional<double> auc_pr;
  std::optional<double> random_baseline;
  std::size_t n_scored = 0;  // timestamps carrying both a score and a label
  std::string score_digest;  // empty for failed runs
  std::vector<std::string> warnings;
  Conventions conventions;

  bool ok() const noexcept { return status == RunStatus::kOk; }
};

// (method, dataset, entity, tier, seed, schema_version)
using DedupKey = std::tuple<std::string, std::string, std::string, std::string, std::uint64_t, int>;
DedupKey dedup_key(const RunRecord& record);

// "sha256:<hex>" over the little-endian IEEE-754 bytes of each score.
std::string score_digest(std::span<const double> scores);

Json config_to_json(const DetectorConfig& config);
DetectorConfig config_from_json(const Json& j);

Json to_json(const RunRecord& record);

// Problems found when checking `j` against its declared schema_version; empty
// means valid.
std::vector<std::string> schema_problems(const Json& j);

// Validates then decodes; throws kSchema listing the problems.
RunRecord record_from_json(const Json& j);

}  // namespace tierbench
