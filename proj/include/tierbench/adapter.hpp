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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tierbench/harness.hpp"
#include "tierbench/ladder.hpp"
#include "tierbench/record.hpp"

namespace tierbench {

inline constexpr int kProtocolVersion = 1;

// What an external detector declares in its HELLO_OK reply.
struct AdapterHandshake {
  int protocol_version = kProtocolVersion;
  std::string method_id;
  DetectorConfig base_config;  // declared defaults with their scaling roles
  bool windowed = false;
  // Window length comes from this parameter after scaling when set,
  // otherwise from fixed_window.
  std::string window_param;
  std::size_t fixed_window = 1;
  bool reports_phase_timings = false;

  WindowingSpec windowing(const DetectorConfig& scaled) const;
};

AdapterHandshake parse_handshake(const Json& hello_ok);

struct AdapterOptions {
  std::filesystem::path executable;
  std::vector<std::string> args;
  std::chrono::milliseconds handshake_timeout{30000};
  std::chrono::milliseconds call_timeout{std::chrono::hours(1)};
  // Where train/test matrices are written for the child; a fresh temporary
  // directory when empty.
  std::filesystem::path work_dir;
};

// Child process speaking one JSON message per line over stdin/stdout.
// The child is killed on destruction if still running.
class AdapterProcess {
 public:
  AdapterProcess(const AdapterOptions& options, std::size_t thread_cap);
  ~AdapterProcess();

  AdapterProcess(const AdapterProcess&) = delete;
  AdapterProcess& operator=(const AdapterProcess&) = delete;

  void send(const Json& message);
  // Throws kProtocol on timeout, EOF or malformed JSON.
  Json receive(std::chrono::milliseconds timeout);
  // Sends BYE and waits briefly for a clean exit; kills otherwise.
  void close();
  void kill();

 private:
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
};

// Spawns the adapter, performs HELLO and returns its declaration.
AdapterHandshake query_adapter(const AdapterOptions& options);

// Full HELLO / FIT / SCORE session for one (entity, tier, seed). The harness
// clock around each round-trip is authoritative; child-reported phase
// timings are logged alongside. Every failure becomes a FAILED record.
RunRecord adapter_session(const AdapterOptions& options, const Entity& entity, const TierSpec& tier,
                          std::uint64_t seed, const RunOptions& run_options = {});

}  // namespace tierbench
