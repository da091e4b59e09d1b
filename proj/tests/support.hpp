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

#include <chrono>
#include <filesystem>
#include <random>
#include <string>
#include <thread>

#include "tierbench/detectors.hpp"
#include "tierbench/error.hpp"
#include "tierbench/harness.hpp"
#include "tierbench/record.hpp"

namespace tierbench::testing {

// Pointwise detector that sleeps for fixed fit/score durations and scores
// each row by its first column.
class SleepyDetector final : public Detector {
 public:
  SleepyDetector(std::chrono::milliseconds fit, std::chrono::milliseconds score) : fit_(fit), score_(score) {}

  std::string_view id() const override { return "sleepy"; }
  DetectorConfig default_config(std::size_t) const override {
    return DetectorConfig("sleepy", {{"budget", 10, ScalingRole::kWork}});
  }
  std::unique_ptr<Model> fit(const TimeSeries&, const DetectorConfig&, std::uint64_t, ComputePool&) const override {
    std::this_thread::sleep_for(fit_);
    return std::make_unique<M>(score_);
  }

 private:
  struct M final : Model {
    explicit M(std::chrono::milliseconds d) : d(d) {}
    std::vector<double> score(const TimeSeries& test, ComputePool&) const override {
      std::this_thread::sleep_for(d);
      return test.column(0);
    }
    std::chrono::milliseconds d;
  };
  std::chrono::milliseconds fit_, score_;
};

// Always throws a config error from fit.
class BrokenDetector final : public Detector {
 public:
  std::string_view id() const override { return "broken"; }
  DetectorConfig default_config(std::size_t) const override { return DetectorConfig("broken", {}); }
  std::unique_ptr<Model> fit(const TimeSeries&, const DetectorConfig&, std::uint64_t, ComputePool&) const override {
    throw Error(ErrorKind::kConfig, "broken: refuses to fit");
  }
};

inline Entity synthetic_entity(std::size_t length = 4000, std::uint64_t seed = 1, std::size_t channels = 4) {
  SyntheticOptions opt;
  opt.length = length;
  opt.channels = channels;
  opt.seed = seed;
  return {"synthetic", "synthetic-" + std::to_string(seed), split_contiguous(generate_synthetic(opt), 0.5, 0.2)};
}

inline TimeSeries random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> v(rows * cols);
  for (auto& x : v) x = n(rng);
  return TimeSeries(rows, cols, std::move(v));
}

// Successful instrumented record with the given throughput and accuracy;
// `work` becomes the scaled value of a single WORK parameter.
inline RunRecord fake_record(const std::string& method, const std::string& dataset, const std::string& entity,
                             const std::string& tier, std::int64_t work, std::uint64_t seed, double wps,
                             double auc, std::size_t n = 1000, std::size_t w = 1) {
  RunRecord r;
  r.method_id = method;
  r.dataset_id = dataset;
  r.entity_id = entity;
  r.tier = {tier, 1, 1.0};
  r.seed = seed;
  r.base_config = DetectorConfig(method, {{"work", 100, ScalingRole::kWork}});
  r.scaled_config = DetectorConfig(method, {{"work", work, ScalingRole::kWork}});
  r.diff = config_diff(r.base_config, r.scaled_config);
  r.thread_cap_applied = 1;
  r.length = w == 1 ? n : n + w - 1;
  r.window_length = w;
  r.windowed = w > 1;
  r.n_scored_units = n;
  r.n_scored = n;
  r.timing.t_inf_source = TInfSource::kInstrumented;
  r.timing.infer_time_s = static_cast<double>(n) / wps;
  r.timing.fit_time_s = 0.5;
  r.timing.total_time_s = *r.timing.infer_time_s + 0.5;
  r.auc_pr = auc;
  r.random_baseline = 0.02;
  r.score_digest = "sha256:00";
  return r;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::mt19937_64 rng(std::random_device{}());
    path_ = std::filesystem::temp_directory_path() / ("tierbench-test-" + std::to_string(rng()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace tierbench::testing
