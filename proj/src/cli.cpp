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

#include "tierbench/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "tierbench/adapter.hpp"
#include "tierbench/audit.hpp"
#include "tierbench/detectors.hpp"
#include "tierbench/error.hpp"
#include "tierbench/feasibility.hpp"
#include "tierbench/metrics.hpp"

namespace tierbench::cli {

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<std::string> flatten(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const auto& i : items) {
    for (auto& s : split_list(i)) out.push_back(std::move(s));
  }
  return out;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUsage:
    case ErrorKind::kConfig:
      return kUsageError;
    case ErrorKind::kSchema:
      return kSchemaError;
    default:
      return kDataError;
  }
}

std::string fixed(double v, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

}  // namespace

MethodSpec parse_method(const std::string& token) {
  constexpr std::string_view prefix = "adapter:";
  if (token.rfind(prefix, 0) == 0) {
    std::filesystem::path exe = token.substr(prefix.size());
    if (exe.empty()) throw Error(ErrorKind::kUsage, "adapter method needs a path");
    return {token, exe};
  }
  if (!is_builtin_method(token)) throw Error(ErrorKind::kUsage, "unknown method '" + token + "'");
  return {token, {}};
}

namespace {

std::vector<Entity> synthetic_entities(const BatchPlan& plan, const std::string& spec) {
  SyntheticOptions opt;
  std::size_t count = 1;
  std::uint64_t seed = 0;
  for (const auto& kv : split_list(spec)) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::kUsage, "synthetic spec entry '" + kv + "' is not key=value");
    const std::string key = kv.substr(0, eq);
    const std::string value = kv.substr(eq + 1);
    try {
      if (key == "T") opt.length = std::stoul(value);
      else if (key == "d") opt.channels = std::stoul(value);
      else if (key == "rate") opt.target_rate = std::stod(value);
      else if (key == "entities") count = std::stoul(value);
      else if (key == "seed") seed = std::stoull(value);
      else throw Error(ErrorKind::kUsage, "unknown synthetic key '" + key + "'");
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::kUsage, "bad value for synthetic key '" + key + "'");
    }
  }
  std::vector<Entity> out;
  for (std::size_t e = 0; e < count; ++e) {
    opt.seed = seed + e;
    auto series = generate_synthetic(opt);
    out.push_back({plan.dataset_id.empty() ? "synthetic" : plan.dataset_id, "synthetic-" + std::to_string(e),
                   split_contiguous(series, plan.train_frac, plan.val_frac)});
  }
  return out;
}

}  // namespace

std::vector<Entity> load_entities(const BatchPlan& plan) {
  std::vector<Entity> out;
  for (const auto& ds : plan.datasets) {
    if (plan.format == "synthetic") {
      auto more = synthetic_entities(plan, ds);
      out.insert(out.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
    } else if (plan.format == "csv") {
      const std::filesystem::path path = ds;
      auto series = load_labeled_csv(path, plan.has_header);
      out.push_back({plan.dataset_id.empty() ? "csv" : plan.dataset_id, path.stem().string(),
                     split_contiguous(series, plan.train_frac, plan.val_frac)});
    } else if (plan.format == "smd") {
      const std::filesystem::path root = ds;
      const auto data_dir = root / "test";
      const auto label_dir = root / "test_label";
      if (!std::filesystem::is_directory(data_dir) || !std::filesystem::is_directory(label_dir)) {
        throw Error(ErrorKind::kData, root.string() + " lacks test/ and test_label/ directories");
      }
      std::vector<std::filesystem::path> files;
      for (const auto& f : std::filesystem::directory_iterator(data_dir)) {
        if (f.is_regular_file() && f.path().extension() == ".txt") files.push_back(f.path());
      }
      std::sort(files.begin(), files.end());
      if (files.empty()) throw Error(ErrorKind::kData, "no entities under " + data_dir.string());
      for (const auto& f : files) {
        auto series = load_smd(f, label_dir / f.filename());
        out.push_back({plan.dataset_id.empty() ? "smd" : plan.dataset_id, f.stem().string(),
                       split_contiguous(series, plan.train_frac, plan.val_frac)});
      }
    } else {
      throw Error(ErrorKind::kUsage, "unknown format '" + plan.format + "'");
    }
  }
  return out;
}

namespace {

struct PlannedRun {
  const MethodSpec* method;
  std::string method_id;
  const Entity* entity;
  const TierSpec* tier;
  std::uint64_t seed;
};

Json plan_header(const BatchPlan& plan, std::size_t n_runs, std::size_t skipped) {
  Json tiers = Json::array();
  for (const auto& t : plan.tiers) {
    tiers.push_back({{"id", t.id},
                     {"thread_cap", t.thread_cap ? Json(*t.thread_cap) : Json(nullptr)},
                     {"scale", t.scale}});
  }
  Json methods = Json::array();
  for (const auto& m : plan.methods) methods.push_back(m.name);
  return {{"schema_version", kSchemaVersion},
          {"plan",
           {{"datasets", plan.datasets},
            {"format", plan.format},
            {"train_frac", plan.train_frac},
            {"val_frac_of_train", plan.val_frac},
            {"methods", methods},
            {"tiers", tiers},
            {"seeds", plan.seeds},
            {"n_runs", n_runs},
            {"n_skipped_resume", skipped},
            {"instrument_phases", plan.run_options.instrument_phases},
            {"warmup", plan.run_options.warmup}}},
          {"machine_width", plan.run_options.machine_width},
          {"clock_resolution_s", probe_clock_resolution()}};
}

void print_summary(const std::vector<RunRecord>& records, std::ostream& out) {
  struct Cell {
    std::vector<double> auc;
    std::vector<double> lifts;
    std::vector<double> wps;
    std::size_t failed = 0;
  };
  std::map<std::pair<std::string, std::string>, Cell> cells;
  std::vector<std::string> tier_order;
  for (const auto& r : records) {
    if (std::find(tier_order.begin(), tier_order.end(), r.tier.id) == tier_order.end()) tier_order.push_back(r.tier.id);
    auto& c = cells[{r.method_id, r.tier.id}];
    if (!r.ok()) {
      ++c.failed;
      continue;
    }
    c.auc.push_back(*r.auc_pr);
    if (r.random_baseline && *r.random_baseline > 0.0) c.lifts.push_back(lift(*r.auc_pr, *r.random_baseline));
    c.wps.push_back(throughput(r).wps_inference);
  }
  out << std::left << std::setw(14) << "method" << std::setw(10) << "tier" << std::right << std::setw(10)
      << "runs" << std::setw(8) << "failed" << std::setw(14) << "mean_auc_pr" << std::setw(11) << "mean_lift"
      << std::setw(16) << "median_wps" << '\n';
  std::set<std::string> methods;
  for (const auto& [k, c] : cells) methods.insert(k.first);
  for (const auto& m : methods) {
    for (const auto& t : tier_order) {
      auto it = cells.find({m, t});
      if (it == cells.end()) continue;
      const Cell& c = it->second;
      std::string auc = "-", lifted = "-", wps = "-";
      if (!c.auc.empty()) {
        double sum = 0.0;
        for (double a : c.auc) sum += a;
        auc = fixed(sum / static_cast<double>(c.auc.size()), 4);
        wps = fixed(quantile(c.wps, 0.5), 0);
      }
      if (!c.lifts.empty()) {
        double sum = 0.0;
        for (double l : c.lifts) sum += l;
        lifted = fixed(sum / static_cast<double>(c.lifts.size()), 2);
      }
      out << std::left << std::setw(14) << m << std::setw(10) << t << std::right << std::setw(10)
          << c.auc.size() + c.failed << std::setw(8) << c.failed << std::setw(14) << auc << std::setw(11) << lifted
          << std::setw(16) << wps << '\n';
    }
  }
}

int cmd_run(BatchPlan plan, std::ostream& out, std::ostream& err) {
  std::vector<Entity> entities;
  std::map<std::string, std::string> adapter_ids;
  std::map<std::string, DetectorConfig> base_configs;
  try {
    if (plan.methods.empty()) throw Error(ErrorKind::kUsage, "no methods given");
    if (plan.seeds.empty()) throw Error(ErrorKind::kUsage, "no seeds given");
    validate_ladder(plan.tiers);
    entities = load_entities(plan);
    if (entities.empty()) throw Error(ErrorKind::kData, "no entities loaded");
    for (const auto& m : plan.methods) {
      if (!m.is_adapter()) continue;
      AdapterOptions opt;
      opt.executable = m.adapter;
      adapter_ids[m.name] = query_adapter(opt).method_id;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind() == ErrorKind::kProtocol ? ErrorKind::kUsage : e.kind());
  }

  std::set<DedupKey> done;
  if (plan.resume && std::filesystem::exists(plan.out)) {
    auto prior = read_run_log(plan.out);
    for (const auto& r : prior.records) done.insert(dedup_key(r));
  }

  // The whole cross-product is fixed before anything runs.
  std::vector<PlannedRun> runs;
  std::size_t skipped = 0;
  for (const auto& m : plan.methods) {
    const std::string id = m.is_adapter() ? adapter_ids[m.name] : m.name;
    for (const auto& e : entities) {
      for (const auto& t : plan.tiers) {
        for (auto s : plan.seeds) {
          if (done.count({id, e.dataset_id, e.entity_id, t.id, s, kSchemaVersion})) {
            ++skipped;
            continue;
          }
          runs.push_back({&m, id, &e, &t, s});
        }
      }
    }
  }

  AuditLog log(plan.out);
  std::vector<RunRecord> records;
  try {
    AuditLog(batch_log_path(plan.out)).emit_header(plan_header(plan, runs.size(), skipped));
    for (const auto& run : runs) {
      RunRecord record;
      if (run.method->is_adapter()) {
        AdapterOptions opt;
        opt.executable = run.method->adapter;
        record = adapter_session(opt, *run.entity, *run.tier, run.seed, plan.run_options);
      } else {
        auto detector = make_detector(run.method_id);
        const auto base = detector->default_config(run.entity->split.train.cols());
        record = run_benchmark(*detector, base, *run.entity, *run.tier, run.seed, plan.run_options);
      }
      log.emit(record);
      if (!record.ok()) {
        err << "run failed: " << record.method_id << " " << record.entity_id << " " << record.tier.id
            << " seed=" << record.seed << ": " << record.failure_reason << '\n';
      }
      records.push_back(std::move(record));
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  }
  out << "wrote " << records.size() << " run records to " << plan.out.string();
  if (skipped) out << " (" << skipped << " already logged, skipped)";
  out << '\n';
  print_summary(records, out);
  return kOk;
}

ParsedLog load_log_or_report(const std::filesystem::path& path, std::ostream& err, int& code) {
  ParsedLog log;
  try {
    log = read_run_log(path);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    code = kDataError;
    return log;
  }
  if (!log.problems.empty()) {
    for (const auto& p : log.problems) err << path.string() << ":" << p.line << ": " << p.message << '\n';
    code = kSchemaError;
  }
  return log;
}

std::vector<RunRecord> filter_tiers(const std::vector<RunRecord>& records, const std::vector<std::string>& tiers) {
  if (tiers.empty()) return records;
  std::vector<RunRecord> out;
  for (const auto& r : records) {
    if (std::find(tiers.begin(), tiers.end(), r.tier.id) != tiers.end()) out.push_back(r);
  }
  return out;
}

Json report_metadata(const std::filesystem::path& runlog, const std::vector<double>& taus) {
  return {{"source_log", runlog.string()},
          {"feasibility_rule", "inclusive: wps_inference >= tau"},
          {"seed_aggregation", "mean AUC-PR and mean wps per configuration, then best feasible"},
          {"quantile_estimator", kQuantileEstimator},
          {"ap_estimator", "step_unique_threshold"},
          {"extrapolation", "none; measured configurations only"},
          {"taus", taus}};
}

int cmd_sweep(const std::filesystem::path& runlog, std::vector<double> taus, const std::vector<std::string>& tiers,
              const std::filesystem::path& out_path, std::ostream& out, std::ostream& err) {
  int code = kOk;
  auto log = load_log_or_report(runlog, err, code);
  if (code != kOk) return code;
  if (taus.empty()) taus = default_tau_grid();
  FeasibilityReport report;
  try {
    report = sweep(filter_tiers(log.records, tiers), taus);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  }
  if (out_path.empty()) {
    write_feasibility_csv(report, out);
    return kOk;
  }
  std::ofstream csv(out_path, std::ios::binary | std::ios::trunc);
  write_feasibility_csv(report, csv);
  auto meta_path = out_path;
  meta_path.replace_extension(".meta.json");
  std::ofstream meta(meta_path, std::ios::binary | std::ios::trunc);
  meta << report_metadata(runlog, taus).dump(2) << '\n';
  if (!csv || !meta) {
    err << "error: cannot write " << out_path.string() << '\n';
    return kDataError;
  }
  out << "wrote " << report.cells.size() << " rows to " << out_path.string() << '\n';
  return kOk;
}

int cmd_validate(const std::filesystem::path& runlog, std::ostream& out, std::ostream& err) {
  int code = kOk;
  auto log = load_log_or_report(runlog, err, code);
  if (code == kDataError) return code;
  if (log.schema_versions.size() > 1) {
    err << "warning: mixed schema versions:";
    for (int v : log.schema_versions) err << ' ' << v;
    err << " (each line validated against its own version)\n";
  }
  std::map<std::tuple<std::string, std::string, std::string>, std::size_t> counts;
  for (const auto& r : log.records) ++counts[{r.method_id, r.tier.id, std::string(to_string(r.status))}];
  out << log.records.size() << " valid run records, " << log.headers.size() << " batch headers, "
      << log.problems.size() << " invalid lines\n";
  for (const auto& [k, n] : counts) {
    out << std::get<0>(k) << ',' << std::get<1>(k) << ',' << std::get<2>(k) << ',' << n << '\n';
  }
  return code;
}

std::string safe_name(std::string s) {
  for (auto& c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '_';
  }
  return s;
}

int cmd_pareto(const std::filesystem::path& runlog, const std::filesystem::path& out_dir, std::ostream& out,
               std::ostream& err) {
  int code = kOk;
  auto log = load_log_or_report(runlog, err, code);
  if (code != kOk) return code;
  std::vector<std::string> tiers;
  for (const auto& r : log.records) {
    if (std::find(tiers.begin(), tiers.end(), r.tier.id) == tiers.end()) tiers.push_back(r.tier.id);
  }
  try {
    if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
    for (const auto& t : tiers) {
      auto points = method_points(log.records, t);
      auto front = pareto_front(points);
      if (out_dir.empty()) {
        out << "# tier " << t << '\n';
        write_pareto_csv(points, front, out);
        continue;
      }
      const auto path = out_dir / ("pareto_" + safe_name(t) + ".csv");
      std::ofstream f(path, std::ios::binary | std::ios::trunc);
      write_pareto_csv(points, front, f);
      if (!f) throw Error(ErrorKind::kData, "cannot write " + path.string());
      out << "wrote " << path.string() << '\n';
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  }
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Compute-ladder benchmark harness for time-series anomaly detectors"};
  app.name("tierbench");
  app.require_subcommand(1);

  BatchPlan plan;
  std::vector<std::string> datasets, methods, tier_ids, seeds_raw;
  std::string tier_file;
  bool no_instrument = false, no_warmup = false;
  auto* run = app.add_subcommand("run", "Run the method x entity x tier x seed cross-product");
  run->add_option("--dataset", datasets, "Dataset path(s), or a synthetic spec like T=4000,d=4,rate=0.02,entities=3")
      ->required();
  run->add_option("--format", plan.format, "csv | smd | synthetic")
      ->check(CLI::IsMember({"csv", "smd", "synthetic"}));
  run->add_option("--dataset-id", plan.dataset_id, "Dataset id recorded in the log");
  run->add_flag("--header", plan.has_header, "CSV files carry a header row");
  run->add_option("--methods", methods, "Comma-separated methods (hbos,copod,lof,iforest,pca,adapter:PATH)")
      ->required();
  run->add_option("--tiers", tier_ids, "Comma-separated tier ids (default: the whole ladder)");
  run->add_option("--tier-file", tier_file, "JSON ladder definition");
  run->add_option("--seeds", seeds_raw, "Comma-separated seeds")->default_str("0,1");
  run->add_option("--out", plan.out, "Run log to append to")->required();
  run->add_flag("--resume", plan.resume, "Skip runs already present in the log");
  run->add_option("--train-frac", plan.train_frac, "Leading fraction used for train+validation");
  run->add_option("--val-frac", plan.val_frac, "Fraction of the training part held out for validation");
  run->add_flag("--no-instrument", no_instrument, "Do not time scoring separately (t_inf = full-run time)");
  run->add_flag("--no-warmup", no_warmup, "Skip the untimed warm-up scoring pass");

  std::string runlog, out_path;
  std::vector<std::string> taus_raw, sweep_tiers;
  auto* sweep_cmd = app.add_subcommand("sweep", "Coverage and best feasible AUC-PR over throughput targets");
  sweep_cmd->add_option("runlog", runlog, "Run log")->required();
  sweep_cmd->add_option("--taus", taus_raw, "Comma-separated targets in windows/s (default grid when empty)");
  sweep_cmd->add_option("--tiers", sweep_tiers, "Restrict to these tiers");
  sweep_cmd->add_option("--out", out_path, "CSV output (stdout when absent)");

  auto* validate_cmd = app.add_subcommand("validate", "Schema-check every line of a run log");
  validate_cmd->add_option("runlog", runlog, "Run log")->required();

  auto* pareto_cmd = app.add_subcommand("pareto", "Per-tier Pareto fronts of median wps vs mean AUC-PR");
  pareto_cmd->add_option("runlog", runlog, "Run log")->required();
  pareto_cmd->add_option("--out", out_path, "Output directory (stdout when absent)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kUsageError;
  }

  try {
    if (*run) {
      plan.datasets = plan.format == "synthetic" ? datasets : flatten(datasets);
      for (const auto& m : flatten(methods)) plan.methods.push_back(parse_method(m));
      const auto ladder = tier_file.empty() ? canonical_ladder() : load_ladder(tier_file);
      const auto wanted = flatten(tier_ids);
      if (wanted.empty()) {
        plan.tiers = ladder;
      } else {
        for (const auto& id : wanted) {
          auto it = std::find_if(ladder.begin(), ladder.end(), [&](const TierSpec& t) { return t.id == id; });
          if (it == ladder.end()) throw Error(ErrorKind::kUsage, "unknown tier '" + id + "'");
          plan.tiers.push_back(*it);
        }
      }
      auto seed_tokens = flatten(seeds_raw);
      if (seed_tokens.empty()) seed_tokens = {"0", "1"};
      for (const auto& s : seed_tokens) {
        try {
          plan.seeds.push_back(std::stoull(s));
        } catch (const std::logic_error&) {
          throw Error(ErrorKind::kUsage, "bad seed '" + s + "'");
        }
      }
      plan.run_options.instrument_phases = !no_instrument;
      plan.run_options.warmup = !no_warmup;
      return cmd_run(std::move(plan), out, err);
    }
    if (*sweep_cmd) {
      std::vector<double> taus;
      for (const auto& t : flatten(taus_raw)) {
        try {
          taus.push_back(std::stod(t));
        } catch (const std::logic_error&) {
          throw Error(ErrorKind::kUsage, "bad tau '" + t + "'");
        }
      }
      return cmd_sweep(runlog, taus, flatten(sweep_tiers), out_path, out, err);
    }
    if (*validate_cmd) return cmd_validate(runlog, out, err);
    if (*pareto_cmd) return cmd_pareto(runlog, out_path, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  }
  return kUsageError;
}

}  // namespace tierbench::cli
