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

#include "tierbench/record.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <memory>

#include <openssl/evp.h>

#include "tierbench/error.hpp"

namespace tierbench {

std::string_view to_string(TInfSource source) {
  return source == TInfSource::kInstrumented ? "INSTRUMENTED" : "E2E_FALLBACK";
}

std::string_view to_string(RunStatus status) { return status == RunStatus::kOk ? "OK" : "FAILED"; }

DedupKey dedup_key(const RunRecord& r) {
  return {r.method_id, r.dataset_id, r.entity_id, r.tier.id, r.seed, r.schema_version};
}

std::string score_digest(std::span<const double> scores) {
  std::vector<unsigned char> bytes;
  bytes.reserve(scores.size() * 8);
  for (double s : scores) {
    auto bits = std::bit_cast<std::uint64_t>(s);
    for (int k = 0; k < 8; ++k) bytes.push_back(static_cast<unsigned char>(bits >> (8 * k)));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), md, &len) != 1) {
    throw Error(ErrorKind::kData, "sha256 digest failed");
  }
  std::string out = "sha256:";
  char hex[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(hex, sizeof(hex), "%02x", md[i]);
    out += hex;
  }
  return out;
}

Json config_to_json(const DetectorConfig& config) {
  Json params = Json::array();
  for (const auto& p : config.params()) {
    params.push_back({{"name", p.name}, {"value", p.value}, {"role", to_string(p.role)}});
  }
  Json constraints = Json::array();
  for (const auto& c : config.constraints()) {
    constraints.push_back({{"dimension", c.dimension}, {"divisor", c.divisor}});
  }
  return {{"method_id", config.method_id()}, {"params", params}, {"constraints", constraints}};
}

DetectorConfig config_from_json(const Json& j) {
  std::vector<Param> params;
  for (const auto& p : j.at("params")) {
    params.push_back({p.at("name").get<std::string>(), p.at("value").get<std::int64_t>(),
                      parse_role(p.at("role").get<std::string>())});
  }
  std::vector<DivisibilityConstraint> constraints;
  if (j.contains("constraints")) {
    for (const auto& c : j.at("constraints")) {
      constraints.push_back({c.at("dimension").get<std::string>(), c.at("divisor").get<std::string>()});
    }
  }
  return DetectorConfig(j.at("method_id").get<std::string>(), std::move(params), std::move(constraints));
}

namespace {

template <typename T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

Json string_or_null(const std::string& s) { return s.empty() ? Json(nullptr) : Json(s); }

}  // namespace

Json to_json(const RunRecord& r) {
  Json entries = Json::array();
  for (const auto& e : r.diff.entries) {
    entries.push_back({{"param", e.param},
                       {"old", e.old_value},
                       {"new", e.new_value},
                       {"role", to_string(e.role)},
                       {"rule", e.rule}});
  }
  Json repairs = Json::array();
  for (const auto& e : r.diff.repairs) {
    repairs.push_back({{"param", e.param},
                       {"before", e.before},
                       {"after", e.after},
                       {"dimension", e.constraint.dimension},
                       {"divisor", e.constraint.divisor}});
  }

  Json j;
  j["schema_version"] = r.schema_version;
  j["record_type"] = "run";
  j["status"] = to_string(r.status);
  j["failure_reason"] = string_or_null(r.failure_reason);
  j["method_id"] = r.method_id;
  j["dataset_id"] = r.dataset_id;
  j["entity_id"] = r.entity_id;
  j["tier"] = {{"id", r.tier.id}, {"thread_cap", optional_json(r.tier.thread_cap)}, {"scale", r.tier.scale}};
  j["seed"] = r.seed;
  j["base_config"] = config_to_json(r.base_config);
  j["scaled_config"] = config_to_json(r.scaled_config);
  j["diff"] = {{"entries", entries}, {"repairs", repairs}};
  if (r.thread_cap_applied) j["thread_cap_applied"] = *r.thread_cap_applied;
  j["thread_cap_note"] = string_or_null(r.thread_cap_note);
  j["timing"] = {{"fit_time_s", r.timing.fit_time_s},
                 {"infer_time_s", optional_json(r.timing.infer_time_s)},
                 {"total_time_s", r.timing.total_time_s},
                 {"t_inf_source", to_string(r.timing.t_inf_source)},
                 {"warmup", r.timing.warmup},
                 {"reported_fit_time_s", optional_json(r.timing.reported_fit_time_s)},
                 {"reported_infer_time_s", optional_json(r.timing.reported_infer_time_s)}};
  j["N"] = r.n_scored_units;
  j["T"] = r.length;
  j["w"] = r.window_length;
  j["windowed"] = r.windowed;
  j["auc_pr"] = optional_json(r.auc_pr);
  j["random_baseline"] = optional_json(r.random_baseline);
  j["n_scored"] = r.n_scored;
  j["score_digest"] = string_or_null(r.score_digest);
  j["warnings"] = r.warnings;
  if (r.schema_version >= 2) {
    j["conventions"] = {{"rounding", r.conventions.rounding},
                        {"ap_estimator", r.conventions.ap_estimator},
                        {"feasibility", r.conventions.feasibility}};
  }
  return j;
}

namespace {

class Checker {
 public:
  explicit Checker(const Json& root) : root_(root) {}

  const Json* field(const Json& obj, const char* key, const std::string& where) {
    if (!obj.is_object()) {
      fail(where + " is not an object");
      return nullptr;
    }
    auto it = obj.find(key);
    if (it == obj.end()) {
      fail("missing field " + where + key);
      return nullptr;
    }
    return &*it;
  }

  void string(const Json& obj, const char* key, const std::string& where = "", bool nullable = false) {
    if (const Json* v = field(obj, key, where)) {
      if (!(v->is_string() || (nullable && v->is_null()))) fail(where + key + " must be a string");
    }
  }
  void integer(const Json& obj, const char* key, const std::string& where = "", long long min = 0) {
    if (const Json* v = field(obj, key, where)) {
      if (!v->is_number_integer() || v->get<long long>() < min) {
        fail(where + key + " must be an integer >= " + std::to_string(min));
      }
    }
  }
  void number(const Json& obj, const char* key, const std::string& where = "", bool nullable = false) {
    if (const Json* v = field(obj, key, where)) {
      if (v->is_null() && nullable) return;
      if (!v->is_number() || !std::isfinite(v->get<double>())) fail(where + key + " must be a finite number");
    }
  }
  void boolean(const Json& obj, const char* key, const std::string& where = "") {
    if (const Json* v = field(obj, key, where)) {
      if (!v->is_boolean()) fail(where + key + " must be a boolean");
    }
  }
  void config(const Json& obj, const char* key) {
    const Json* c = field(obj, key, "");
    if (!c) return;
    const std::string where = std::string(key) + ".";
    string(*c, "method_id", where);
    const Json* params = field(*c, "params", where);
    if (params && !params->is_array()) fail(where + "params must be an array");
    if (params && params->is_array()) {
      for (const auto& p : *params) {
        string(p, "name", where + "params[].");
        integer(p, "value", where + "params[].", 1);
        string(p, "role", where + "params[].");
      }
    }
    if (ok()) {
      try {
        config_from_json(*c);
      } catch (const std::exception& e) {
        fail(where + " invalid: " + e.what());
      }
    }
  }

  void fail(std::string message) { problems_.push_back(std::move(message)); }
  bool ok() const { return problems_.empty(); }
  std::vector<std::string> take() { return std::move(problems_); }
  const Json& root() const { return root_; }

 private:
  const Json& root_;
  std::vector<std::string> problems_;
};

}  // namespace

std::vector<std::string> schema_problems(const Json& j) {
  Checker c(j);
  if (!j.is_object()) return {"record is not a JSON object"};
  c.integer(j, "schema_version", "", kOldestSchemaVersion);
  if (!c.ok()) return c.take();
  const int version = j.at("schema_version").get<int>();
  if (version > kSchemaVersion) return {"unsupported schema_version " + std::to_string(version)};

  c.string(j, "status");
  c.string(j, "failure_reason", "", true);
  c.string(j, "method_id");
  c.string(j, "dataset_id");
  c.string(j, "entity_id");
  if (const Json* tier = c.field(j, "tier", "")) {
    c.string(*tier, "id", "tier.");
    if (const Json* cap = c.field(*tier, "thread_cap", "tier.")) {
      if (!cap->is_null() && !(cap->is_number_integer() && cap->get<long long>() >= 1)) {
        c.fail("tier.thread_cap must be null or an integer >= 1");
      }
    }
    c.number(*tier, "scale", "tier.");
  }
  c.integer(j, "seed");
  c.config(j, "base_config");
  c.config(j, "scaled_config");
  if (const Json* diff = c.field(j, "diff", "")) {
    const Json* entries = c.field(*diff, "entries", "diff.");
    const Json* repairs = c.field(*diff, "repairs", "diff.");
    if ((entries && !entries->is_array()) || (repairs && !repairs->is_array())) {
      c.fail("diff.entries and diff.repairs must be arrays");
    }
  }
  c.integer(j, "thread_cap_applied", "", 1);
  if (const Json* t = c.field(j, "timing", "")) {
    c.number(*t, "fit_time_s", "timing.");
    c.number(*t, "infer_time_s", "timing.", true);
    c.number(*t, "total_time_s", "timing.");
    c.string(*t, "t_inf_source", "timing.");
    c.boolean(*t, "warmup", "timing.");
  }
  c.integer(j, "N");
  c.integer(j, "T");
  c.integer(j, "w", "", 1);
  c.boolean(j, "windowed");
  c.number(j, "auc_pr", "", true);
  c.number(j, "random_baseline", "", true);
  c.integer(j, "n_scored");
  c.string(j, "score_digest", "", true);
  if (const Json* w = c.field(j, "warnings", "")) {
    if (!w->is_array()) c.fail("warnings must be an array");
  }
  if (version >= 2) {
    if (const Json* conv = c.field(j, "conventions", "")) {
      c.string(*conv, "rounding", "conventions.");
      c.string(*conv, "ap_estimator", "conventions.");
      c.string(*conv, "feasibility", "conventions.");
    }
  }
  if (!c.ok()) return c.take();

  // Cross-field rules.
  const std::string status = j["status"];
  if (status != "OK" && status != "FAILED") c.fail("status must be OK or FAILED");
  const std::string source = j["timing"]["t_inf_source"];
  if (source != "INSTRUMENTED" && source != "E2E_FALLBACK") c.fail("unknown t_inf_source " + source);
  if (source == "INSTRUMENTED" && j["timing"]["infer_time_s"].is_null()) {
    c.fail("INSTRUMENTED record without infer_time_s");
  }
  if (status == "OK") {
    const auto T = j["T"].get<std::size_t>();
    const auto w = j["w"].get<std::size_t>();
    const auto N = j["N"].get<std::size_t>();
    const bool windowed = j["windowed"];
    const std::size_t expect = windowed ? (w <= T ? T - w + 1 : 0) : T;
    if (!windowed && w != 1) c.fail("non-windowed record must have w = 1");
    if (N == 0 || N != expect) c.fail("N does not equal window_count(T, w)");
    if (j["auc_pr"].is_null()) c.fail("OK record without auc_pr");
    if (j["score_digest"].is_null()) c.fail("OK record without score_digest");
    const double fit = j["timing"]["fit_time_s"], total = j["timing"]["total_time_s"];
    if (fit < 0.0 || total < 0.0) c.fail("negative timing");
  } else if (status == "FAILED" && j["failure_reason"].is_null()) {
    c.fail("FAILED record without failure_reason");
  }
  return c.take();
}

RunRecord record_from_json(const Json& j) {
  auto problems = schema_problems(j);
  if (!problems.empty()) {
    std::string msg = "schema violation:";
    for (const auto& p : problems) msg += " " + p + ";";
    throw Error(ErrorKind::kSchema, msg);
  }
  RunRecord r;
  r.schema_version = j["schema_version"];
  r.status = j["status"] == "OK" ? RunStatus::kOk : RunStatus::kFailed;
  if (!j["failure_reason"].is_null()) r.failure_reason = j["failure_reason"];
  r.method_id = j["method_id"];
  r.dataset_id = j["dataset_id"];
  r.entity_id = j["entity_id"];
  r.tier.id = j["tier"]["id"];
  if (!j["tier"]["thread_cap"].is_null()) r.tier.thread_cap = j["tier"]["thread_cap"].get<int>();
  r.tier.scale = j["tier"]["scale"];
  r.seed = j["seed"];
  r.base_config = config_from_json(j["base_config"]);
  r.scaled_config = config_from_json(j["scaled_config"]);
  for (const auto& e : j["diff"]["entries"]) {
    r.diff.entries.push_back({e.at("param"), e.at("old"), e.at("new"), parse_role(e.at("role").get<std::string>()),
                              e.at("rule")});
  }
  for (const auto& e : j["diff"]["repairs"]) {
    r.diff.repairs.push_back({e.at("param"), e.at("before"), e.at("after"), {e.at("dimension"), e.at("divisor")}});
  }
  r.thread_cap_applied = j["thread_cap_applied"].get<int>();
  if (!j["thread_cap_note"].is_null()) r.thread_cap_note = j["thread_cap_note"];
  const Json& t = j["timing"];
  r.timing.fit_time_s = t["fit_time_s"];
  if (!t["infer_time_s"].is_null()) r.timing.infer_time_s = t["infer_time_s"].get<double>();
  r.timing.total_time_s = t["total_time_s"];
  r.timing.t_inf_source = t["t_inf_source"] == "INSTRUMENTED" ? TInfSource::kInstrumented : TInfSource::kE2eFallback;
  r.timing.warmup = t["warmup"];
  if (t.contains("reported_fit_time_s") && !t["reported_fit_time_s"].is_null()) {
    r.timing.reported_fit_time_s = t["reported_fit_time_s"].get<double>();
  }
  if (t.contains("reported_infer_time_s") && !t["reported_infer_time_s"].is_null()) {
    r.timing.reported_infer_time_s = t["reported_infer_time_s"].get<double>();
  }
  r.n_scored_units = j["N"];
  r.length = j["T"];
  r.window_length = j["w"];
  r.windowed = j["windowed"];
  if (!j["auc_pr"].is_null()) r.auc_pr = j["auc_pr"].get<double>();
  if (!j["random_baseline"].is_null()) r.random_baseline = j["random_baseline"].get<double>();
  r.n_scored = j["n_scored"];
  if (!j["score_digest"].is_null()) r.score_digest = j["score_digest"];
  r.warnings = j["warnings"].get<std::vector<std::string>>();
  if (r.schema_version >= 2) {
    r.conventions.rounding = j["conventions"]["rounding"];
    r.conventions.ap_estimator = j["conventions"]["ap_estimator"];
    r.conventions.feasibility = j["conventions"]["feasibility"];
  }
  return r;
}

}  // namespace tierbench
