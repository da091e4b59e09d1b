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

#include "tierbench/harness.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "tierbench/error.hpp"
#include "tierbench/metrics.hpp"

namespace tierbench {

std::mutex& run_slot() {
  static std::mutex mu;
  return mu;
}

namespace {

void mark_failed(RunRecord& record, const std::string& reason) {
  record.status = RunStatus::kFailed;
  record.failure_reason = reason;
  record.auc_pr.reset();
  record.score_digest.clear();
}

}  // namespace

double probe_clock_resolution() {
  using Clock = Stopwatch::Clock;
  auto best = Clock::duration::max();
  for (int i = 0; i < 200; ++i) {
    const auto a = Clock::now();
    auto b = Clock::now();
    while (b == a) b = Clock::now();
    best = std::min(best, b - a);
  }
  return std::chrono::duration<double>(best).count();
}

void finish_scoring(RunRecord& record, const std::vector<double>& window_scores,
                    const LabeledSeries& test, const WindowingSpec& windowing) {
  record.length = test.size();
  record.window_length = windowing.windowed ? windowing.window_length : 1;
  record.windowed = windowing.windowed;
  try {
    record.n_scored_units = window_count(test.size(), windowing);
  } catch (const Error& e) {
    mark_failed(record, e.what());
    return;
  }
  if (window_scores.size() != record.n_scored_units) {
    mark_failed(record, "score length mismatch: expected " + std::to_string(record.n_scored_units) +
                            ", got " + std::to_string(window_scores.size()));
    return;
  }
  if (!std::all_of(window_scores.begin(), window_scores.end(), [](double s) { return std::isfinite(s); })) {
    mark_failed(record, "non-finite score");
    return;
  }
  try {
    const auto aligned = align_window_scores(window_scores, record.window_length, test.size());
    const auto metrics = evaluate(aligned, test.labels());
    record.auc_pr = metrics.auc_pr;
    record.random_baseline = metrics.random_baseline;
    record.n_scored = metrics.n_scored;
  } catch (const Error& e) {
    record.random_baseline = test.anomaly_rate();
    mark_failed(record, e.kind() == ErrorKind::kUndefinedMetric ? "no anomalies in span" : e.what());
    return;
  }
  record.score_digest = score_digest(window_scores);
}

RunRecord run_benchmark(const Detector& detector, const DetectorConfig& base, const Entity& entity,
                        const TierSpec& tier, std::uint64_t seed, const RunOptions& options) {
  std::lock_guard flight(run_slot());

  RunRecord record;
  record.method_id = std::string(detector.id());
  record.dataset_id = entity.dataset_id;
  record.entity_id = entity.entity_id;
  record.tier = tier;
  record.seed = seed;
  record.base_config = base;
  record.scaled_config = base;
  record.length = entity.split.test.size();

  static const double resolution = probe_clock_resolution();
  if (resolution > 1e-3) {
    record.warnings.push_back("clock resolution " + std::to_string(resolution) + " s is coarser than 1 ms");
  }

  const auto cap = apply_thread_cap(tier.thread_cap, options.machine_width);
  record.thread_cap_applied = static_cast<int>(cap.applied);
  record.thread_cap_note = cap.note;

  try {
    auto scaled = scale_config(base, tier);
    record.scaled_config = std::move(scaled.config);
    record.diff = std::move(scaled.diff);
  } catch (const Error& e) {
    mark_failed(record, e.what());
    return record;
  }

  const WindowingSpec windowing = detector.windowing(record.scaled_config);
  record.window_length = windowing.windowed ? windowing.window_length : 1;
  record.windowed = windowing.windowed;

  // The pool exists before any timer starts.
  ComputePool pool(cap.applied);
  Stopwatch total, fit_timer, score_timer;
  std::vector<double> scores;
  try {
    total.start();
    fit_timer.start();
    auto model = detector.fit(entity.split.train, record.scaled_config, seed, pool);
    fit_timer.pause();
    if (options.warmup) {
      total.pause();
      (void)model->score(entity.split.test.series(), pool);
      total.start();
      record.timing.warmup = true;
    }
    score_timer.start();
    scores = model->score(entity.split.test.series(), pool);
    score_timer.pause();
    total.pause();
  } catch (const std::exception& e) {
    fit_timer.pause();
    total.pause();
    record.timing.fit_time_s = fit_timer.seconds();
    record.timing.total_time_s = total.seconds();
    mark_failed(record, e.what());
    return record;
  }

  record.timing.fit_time_s = fit_timer.seconds();
  record.timing.total_time_s = total.seconds();
  if (options.instrument_phases) {
    record.timing.infer_time_s = score_timer.seconds();
    record.timing.t_inf_source = TInfSource::kInstrumented;
  } else {
    record.timing.t_inf_source = TInfSource::kE2eFallback;
  }
  finish_scoring(record, scores, entity.split.test, windowing);
  return record;
}

}  // namespace tierbench
