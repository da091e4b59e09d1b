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

#include <condition_variable>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace tierbench {

// Environment variable carrying the applied cap to child processes.
inline constexpr const char* kThreadCapEnv = "ECOLAD_THREAD_CAP";

// Fixed-width worker pool. parallel_for splits [0, n) into `width` contiguous
// chunks, so which index lands on which worker never affects results that are
// written per index.
class ComputePool {
 public:
  explicit ComputePool(std::size_t width);
  ~ComputePool();

  ComputePool(const ComputePool&) = delete;
  ComputePool& operator=(const ComputePool&) = delete;

  std::size_t width() const noexcept { return width_; }

  // fn(begin, end) is called once per non-empty chunk; blocks until all finish.
  // The first exception thrown by any chunk is rethrown here.
  void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

 private:
  void worker_loop(std::size_t index);

  std::size_t width_;
  std::vector<std::thread> workers_;
  std::mutex mu_;
  std::condition_variable work_cv_;
  std::condition_variable done_cv_;
  const std::function<void(std::size_t, std::size_t)>* job_ = nullptr;
  std::size_t job_size_ = 0;
  std::size_t generation_ = 0;
  std::size_t pending_ = 0;
  bool stopping_ = false;
  std::exception_ptr error_;
  std::mutex submit_mu_;
};

std::size_t machine_width();

struct ThreadCapResult {
  std::size_t applied = 1;
  std::optional<int> requested;  // nullopt = uncapped
  std::string note;              // non-empty when the request was clamped
};

// Resolves a tier cap against the machine width (uncapped -> machine width,
// over-wide caps clamped) and exports the result to kThreadCapEnv.
ThreadCapResult apply_thread_cap(std::optional<int> cap, std::size_t available = machine_width());

}  // namespace tierbench
