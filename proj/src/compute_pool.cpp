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

#include "tierbench/compute_pool.hpp"

#include <algorithm>
#include <cstdlib>

#include "tierbench/error.hpp"

namespace tierbench {

ComputePool::ComputePool(std::size_t width) : width_(std::max<std::size_t>(1, width)) {
  // Chunk 0 always runs on the calling thread.
  for (std::size_t i = 1; i < width_; ++i) workers_.emplace_back([this, i] { worker_loop(i); });
}

ComputePool::~ComputePool() {
  {
    std::lock_guard lock(mu_);
    stopping_ = true;
  }
  work_cv_.notify_all();
  for (auto& t : workers_) t.join();
}

namespace {

std::pair<std::size_t, std::size_t> chunk(std::size_t n, std::size_t parts, std::size_t index) {
  const std::size_t base = n / parts;
  const std::size_t extra = n % parts;
  const std::size_t begin = index * base + std::min(index, extra);
  return {begin, begin + base + (index < extra ? 1 : 0)};
}

}  // namespace

void ComputePool::parallel_for(std::size_t n,
                               const std::function<void(std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  if (width_ == 1 || n == 1) {
    fn(0, n);
    return;
  }
  std::lock_guard submit(submit_mu_);
  {
    std::lock_guard lock(mu_);
    job_ = &fn;
    job_size_ = n;
    pending_ = workers_.size();
    error_ = nullptr;
    ++generation_;
  }
  work_cv_.notify_all();

  std::exception_ptr local;
  auto [b, e] = chunk(n, width_, 0);
  try {
    if (b < e) fn(b, e);
  } catch (...) {
    local = std::current_exception();
  }

  std::unique_lock lock(mu_);
  done_cv_.wait(lock, [&] { return pending_ == 0; });
  job_ = nullptr;
  if (local) std::rethrow_exception(local);
  if (error_) std::rethrow_exception(error_);
}

void ComputePool::worker_loop(std::size_t index) {
  std::size_t seen = 0;
  while (true) {
    const std::function<void(std::size_t, std::size_t)>* job = nullptr;
    std::size_t n = 0;
    {
      std::unique_lock lock(mu_);
      work_cv_.wait(lock, [&] { return stopping_ || generation_ != seen; });
      if (stopping_) return;
      seen = generation_;
      job = job_;
      n = job_size_;
    }
    auto [b, e] = chunk(n, width_, index);
    std::exception_ptr err;
    if (b < e) {
      try {
        (*job)(b, e);
      } catch (...) {
        err = std::current_exception();
      }
    }
    {
      std::lock_guard lock(mu_);
      if (err && !error_) error_ = err;
      if (--pending_ == 0) done_cv_.notify_one();
    }
  }
}

std::size_t machine_width() {
  return std::max(1u, std::thread::hardware_concurrency());
}

ThreadCapResult apply_thread_cap(std::optional<int> cap, std::size_t available) {
  available = std::max<std::size_t>(1, available);
  ThreadCapResult out;
  out.requested = cap;
  if (!cap) {
    out.applied = available;
  } else {
    if (*cap < 1) throw Error(ErrorKind::kConfig, "thread cap must be >= 1");
    const auto want = static_cast<std::size_t>(*cap);
    out.applied = std::min(want, available);
    if (want > available) {
      out.note = "requested cap " + std::to_string(want) + " clamped to machine width " +
                 std::to_string(available);
    }
  }
  ::setenv(kThreadCapEnv, std::to_string(out.applied).c_str(), 1);
  return out;
}

}  // namespace tierbench
