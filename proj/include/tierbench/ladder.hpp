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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tierbench {

// One rung of the compute-reduction ladder.
struct TierSpec {
  std::string id;
  std::optional<int> thread_cap;  // nullopt = uncapped
  double scale = 1.0;

  bool operator==(const TierSpec&) const = default;
};

// REF(uncapped, 1.00), CPU-MT(14, 0.75), CPU-LT(7, 0.50), CPU-1T(1, 0.25).
const std::vector<TierSpec>& canonical_ladder();
const TierSpec& canonical_tier(std::string_view id);

// Validates s in (0,1], caps >= 1, and that caps and s never increase down the ladder.
void validate_ladder(const std::vector<TierSpec>& ladder);

// JSON array of {"id", "thread_cap" (int or null), "scale"}.
std::vector<TierSpec> load_ladder(const std::filesystem::path& path);

enum class ScalingRole { kWork, kWidth, kHeads, kDepth, kWindow, kUnscaled };

std::string_view to_string(ScalingRole role);
ScalingRole parse_role(std::string_view name);

struct Param {
  std::string name;
  std::int64_t value = 1;
  ScalingRole role = ScalingRole::kUnscaled;

  bool operator==(const Param&) const = default;
};

// `divisor` must divide `dimension` (e.g. heads divides embed_dim).
struct DivisibilityConstraint {
  std::string dimension;
  std::string divisor;

  bool operator==(const DivisibilityConstraint&) const = default;
};

class DetectorConfig {
 public:
  DetectorConfig() = default;
  DetectorConfig(std::string method_id, std::vector<Param> params,
                 std::vector<DivisibilityConstraint> constraints = {});

  const std::string& method_id() const noexcept { return method_id_; }
  const std::vector<Param>& params() const noexcept { return params_; }
  const std::vector<DivisibilityConstraint>& constraints() const noexcept { return constraints_; }

  const Param* find(std::string_view name) const;
  std::int64_t value(std::string_view name) const;  // throws kConfig if absent
  void set(std::string_view name, std::int64_t value);

  bool operator==(const DetectorConfig&) const = default;

 private:
  std::string method_id_;
  std::vector<Param> params_;
  std::vector<DivisibilityConstraint> constraints_;
};

struct DiffEntry {
  std::string param;
  std::int64_t old_value = 0;
  std::int64_t new_value = 0;
  ScalingRole role = ScalingRole::kUnscaled;
  std::string rule;

  bool operator==(const DiffEntry&) const = default;
};

struct RepairEvent {
  std::string param;
  std::int64_t before = 0;
  std::int64_t after = 0;
  DivisibilityConstraint constraint;

  bool operator==(const RepairEvent&) const = default;
};

struct ConfigDiff {
  std::vector<DiffEntry> entries;
  std::vector<RepairEvent> repairs;

  bool empty() const noexcept { return entries.empty() && repairs.empty(); }
  bool operator==(const ConfigDiff&) const = default;
};

// Integer-only, monotone in s; round half away from zero.
//   WORK: max(1, round(s v))         WIDTH, HEADS: max(1, round(sqrt(s) v))
//   DEPTH: max(1, round(s^0.25 v))   WINDOW: max(8, round(sqrt(s) v))
std::int64_t scale_param(std::int64_t value, ScalingRole role, double scale);

// Name of the rule applied for a role, as recorded in diffs.
std::string_view scaling_rule(ScalingRole role);

struct RepairResult {
  DetectorConfig config;
  std::vector<RepairEvent> repairs;
};

// Lowers each violated divisor to the largest divisor of its dimension not
// exceeding the current value. Dimensions are never changed.
RepairResult repair_constraints(const DetectorConfig& config);

struct ScaledConfig {
  DetectorConfig config;
  ConfigDiff diff;
};

ScaledConfig scale_config(const DetectorConfig& base, const TierSpec& tier);

// Entries for changed params in base order; repairs are left empty.
ConfigDiff config_diff(const DetectorConfig& base, const DetectorConfig& scaled);

}  // namespace tierbench
