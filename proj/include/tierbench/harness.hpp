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
#include <cstdint>
#include <mutex>
#include <string>

#include "tierbench/compute_pool.hpp"
#include "tierbench/data.hpp"
#include "tierbench/detectors.hpp"
#include "tierbench/ladder.hpp"
#include "tierbench/record.hpp"

namespace tierbench {

// One entity, already split.
struct Entity {
  std::string dataset_id;
  std::string entity_id;
  Split split;
};

struct RunOptions {
  // When false, scoring is not timed separately and t_inf falls back to the
  // full-run time.
  bool instrument_phases = true;
  // One untimed scoring pass before the timed one.
  bool warmup = true;
  std::size_t machine_width = tierbench::machine_width();
};

// Monotonic stopwatch that can be paused; reads seconds.
class Stopwatch {
 public:
  using Clock = std::chrono::steady_clock;

  void start() { began_ = Clock::now(); running_ = true; }
  void pause() {
    if (running_) elapsed_ += Clock::now() - began_;
    running_ = false;
  }
  double seconds() const {
    auto e = elapsed_;
    if (running_) e += Clock::now() - began_;
    return std::chrono::duration<double>(e).count();
  }

 private:
  Clock::time_point began_{};
  Clock::duration elapsed_{};
  bool running_ = false;
};

// Process-wide lock held for the duration of every run (built-in or adapter),
// so timings are never taken while another run is active.
std::mutex& run_slot();

// Smallest observable non-zero step of the steady clock, in seconds.
double probe_clock_resolution();

// Scales the config for the tier, sizes the pool to the cap, times fit and
// scoring, evaluates AUC-PR on the test span. Detector and data errors yield
// a FAILED record rather than an exception. Runs are serialized process-wide.
RunRecord run_benchmark(const Detector& detector, const DetectorConfig& base, const Entity& entity,
                        const TierSpec& tier, std::uint64_t seed, const RunOptions& options = {});

// Shared by built-in and adapter runs: fills N/T/w, metrics and digest from
// window scores. Marks the record FAILED on length mismatch or undefined metrics.
void finish_scoring(RunRecord& record, const std::vector<double>& window_scores,
                    const LabeledSeries& test, const WindowingSpec& windowing);

}  // namespace tierbench
