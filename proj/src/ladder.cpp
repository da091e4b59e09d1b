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

#include "tierbench/ladder.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

#include "tierbench/error.hpp"

namespace tierbench {

const std::vector<TierSpec>& canonical_ladder() {
  static const std::vector<TierSpec> ladder = {
      {"REF", std::nullopt, 1.00},
      {"CPU-MT", 14, 0.75},
      {"CPU-LT", 7, 0.50},
      {"CPU-1T", 1, 0.25},
  };
  return ladder;
}

const TierSpec& canonical_tier(std::string_view id) {
  for (const auto& t : canonical_ladder()) {
    if (t.id == id) return t;
  }
  throw Error(ErrorKind::kUsage, "unknown tier '" + std::string(id) + "'");
}

void validate_ladder(const std::vector<TierSpec>& ladder) {
  if (ladder.empty()) throw Error(ErrorKind::kConfig, "ladder has no tiers");
  std::set<std::string> ids;
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    const auto& t = ladder[i];
    if (t.id.empty()) throw Error(ErrorKind::kConfig, "tier without id");
    if (!ids.insert(t.id).second) throw Error(ErrorKind::kConfig, "duplicate tier id " + t.id);
    if (!(t.scale > 0.0 && t.scale <= 1.0)) {
      throw Error(ErrorKind::kConfig, "tier " + t.id + ": scale must lie in (0,1]");
    }
    if (t.thread_cap && *t.thread_cap < 1) {
      throw Error(ErrorKind::kConfig, "tier " + t.id + ": thread cap must be >= 1");
    }
    if (i == 0) continue;
    const auto& prev = ladder[i - 1];
    if (t.scale > prev.scale) {
      throw Error(ErrorKind::kConfig, "tier " + t.id + ": scale increases along the ladder");
    }
    const bool cap_grows = t.thread_cap ? (prev.thread_cap && *t.thread_cap > *prev.thread_cap)
                                        : prev.thread_cap.has_value();
    if (cap_grows) {
      throw Error(ErrorKind::kConfig, "tier " + t.id + ": thread cap increases along the ladder");
    }
  }
}

std::vector<TierSpec> load_ladder(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kData, "cannot open tier file " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, "tier file " + path.string() + ": " + e.what());
  }
  if (!doc.is_array()) throw Error(ErrorKind::kConfig, "tier file must hold a JSON array");
  std::vector<TierSpec> ladder;
  for (const auto& item : doc) {
    try {
      TierSpec t;
      t.id = item.at("id").get<std::string>();
      const auto& cap = item.at("thread_cap");
      if (!cap.is_null()) t.thread_cap = cap.get<int>();
      t.scale = item.at("scale").get<double>();
      ladder.push_back(std::move(t));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::kConfig, std::string("malformed tier entry: ") + e.what());
    }
  }
  validate_ladder(ladder);
  return ladder;
}

std::string_view to_string(ScalingRole role) {
  switch (role) {
    case ScalingRole::kWork: return "WORK";
    case ScalingRole::kWidth: return "WIDTH";
    case ScalingRole::kHeads: return "HEADS";
    case ScalingRole::kDepth: return "DEPTH";
    case ScalingRole::kWindow: return "WINDOW";
    case ScalingRole::kUnscaled: return "UNSCALED";
  }
  return "UNSCALED";
}

ScalingRole parse_role(std::string_view name) {
  for (auto r : {ScalingRole::kWork, ScalingRole::kWidth, ScalingRole::kHeads, ScalingRole::kDepth,
                 ScalingRole::kWindow, ScalingRole::kUnscaled}) {
    if (to_string(r) == name) return r;
  }
  throw Error(ErrorKind::kConfig, "unknown scaling role '" + std::string(name) + "'");
}

DetectorConfig::DetectorConfig(std::string method_id, std::vector<Param> params,
                               std::vector<DivisibilityConstraint> constraints)
    : method_id_(std::move(method_id)),
      params_(std::move(params)),
      constraints_(std::move(constraints)) {
  std::set<std::string_view> names;
  for (const auto& p : params_) {
    if (!names.insert(p.name).second) {
      throw Error(ErrorKind::kConfig, method_id_ + ": duplicate parameter " + p.name);
    }
    if (p.value < 1) throw Error(ErrorKind::kConfig, method_id_ + ": parameter " + p.name + " must be >= 1");
  }
  for (const auto& c : constraints_) {
    if (!find(c.dimension) || !find(c.divisor)) {
      throw Error(ErrorKind::kConfig,
                  method_id_ + ": constraint refers to unknown parameter " + c.dimension + "/" + c.divisor);
    }
  }
}

const Param* DetectorConfig::find(std::string_view name) const {
  auto it = std::find_if(params_.begin(), params_.end(), [&](const Param& p) { return p.name == name; });
  return it == params_.end() ? nullptr : &*it;
}

std::int64_t DetectorConfig::value(std::string_view name) const {
  const Param* p = find(name);
  if (!p) throw Error(ErrorKind::kConfig, method_id_ + ": missing parameter " + std::string(name));
  return p->value;
}

void DetectorConfig::set(std::string_view name, std::int64_t value) {
  auto it = std::find_if(params_.begin(), params_.end(), [&](const Param& p) { return p.name == name; });
  if (it == params_.end()) throw Error(ErrorKind::kConfig, method_id_ + ": missing parameter " + std::string(name));
  if (value < 1) throw Error(ErrorKind::kConfig, method_id_ + ": parameter " + it->name + " must be >= 1");
  it->value = value;
}

std::int64_t scale_param(std::int64_t value, ScalingRole role, double scale) {
  const double v = static_cast<double>(value);
  // sqrt is correctly rounded, so sqrt(sqrt(s)) stays monotone where pow may not.
  switch (role) {
    case ScalingRole::kWork:
      return std::max<std::int64_t>(1, std::llround(scale * v));
    case ScalingRole::kWidth:
    case ScalingRole::kHeads:
      return std::max<std::int64_t>(1, std::llround(std::sqrt(scale) * v));
    case ScalingRole::kDepth:
      return std::max<std::int64_t>(1, std::llround(std::sqrt(std::sqrt(scale)) * v));
    case ScalingRole::kWindow:
      return std::max<std::int64_t>(8, std::llround(std::sqrt(scale) * v));
    case ScalingRole::kUnscaled:
      return value;
  }
  return value;
}

std::string_view scaling_rule(ScalingRole role) {
  switch (role) {
    case ScalingRole::kWork: return "max(1,round(s*v))";
    case ScalingRole::kWidth:
    case ScalingRole::kHeads: return "max(1,round(sqrt(s)*v))";
    case ScalingRole::kDepth: return "max(1,round(s^0.25*v))";
    case ScalingRole::kWindow: return "max(8,round(sqrt(s)*v))";
    case ScalingRole::kUnscaled: return "unscaled";
  }
  return "unscaled";
}

RepairResult repair_constraints(const DetectorConfig& config) {
  RepairResult out{config, {}};
  for (const auto& c : config.constraints()) {
    const std::int64_t dim = out.config.value(c.dimension);
    const std::int64_t div = out.config.value(c.divisor);
    if (dim % div == 0) continue;
    std::int64_t fixed = std::min(div, dim);
    while (fixed > 1 && dim % fixed != 0) --fixed;
    out.config.set(c.divisor, fixed);
    out.repairs.push_back({c.divisor, div, fixed, c});
  }
  // A later constraint may have lowered a divisor that an earlier one uses as
  // its dimension; a final pass confirms the result is consistent.
  for (const auto& c : config.constraints()) {
    if (out.config.value(c.dimension) % out.config.value(c.divisor) != 0) {
      throw Error(ErrorKind::kRepairFailure,
                  config.method_id() + ": cannot satisfy " + c.divisor + " | " + c.dimension);
    }
  }
  return out;
}

ScaledConfig scale_config(const DetectorConfig& base, const TierSpec& tier) {
  std::vector<Param> params = base.params();
  for (auto& p : params) p.value = scale_param(p.value, p.role, tier.scale);
  DetectorConfig scaled(base.method_id(), std::move(params), base.constraints());
  RepairResult repaired = repair_constraints(scaled);
  ScaledConfig out{std::move(repaired.config), {}};
  out.diff = config_diff(base, out.config);
  out.diff.repairs = std::move(repaired.repairs);
  for (auto& e : out.diff.entries) {
    const bool repaired_param = std::any_of(out.diff.repairs.begin(), out.diff.repairs.end(),
                                            [&](const RepairEvent& r) { return r.param == e.param; });
    if (repaired_param) e.rule += "+repair";
  }
  return out;
}

ConfigDiff config_diff(const DetectorConfig& base, const DetectorConfig& scaled) {
  if (base.method_id() != scaled.method_id()) {
    throw Error(ErrorKind::kStructural,
                "cannot diff configs of different methods: " + base.method_id() + " vs " + scaled.method_id());
  }
  if (base.params().size() != scaled.params().size()) {
    throw Error(ErrorKind::kStructural, base.method_id() + ": parameter sets differ");
  }
  ConfigDiff diff;
  for (const auto& p : base.params()) {
    const Param* q = scaled.find(p.name);
    if (!q) throw Error(ErrorKind::kStructural, base.method_id() + ": parameter " + p.name + " missing");
    if (q->value != p.value) {
      diff.entries.push_back({p.name, p.value, q->value, p.role, std::string(scaling_rule(p.role))});
    }
  }
  return diff;
}

}  // namespace tierbench
