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

#include "tierbench/adapter.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <mutex>
#include <thread>

#include "tierbench/error.hpp"

extern char** environ;

namespace tierbench {

WindowingSpec AdapterHandshake::windowing(const DetectorConfig& scaled) const {
  if (!windowed) return WindowingSpec::pointwise();
  if (!window_param.empty()) return WindowingSpec::sliding(static_cast<std::size_t>(scaled.value(window_param)));
  return WindowingSpec::sliding(fixed_window);
}

namespace {

void require_type(const Json& msg, const char* type) {
  if (!msg.is_object() || !msg.contains("type") || !msg["type"].is_string()) {
    throw Error(ErrorKind::kProtocol, "message without a type");
  }
  if (!msg.contains("protocol_version") || msg["protocol_version"] != kProtocolVersion) {
    throw Error(ErrorKind::kProtocol, "message without protocol_version " + std::to_string(kProtocolVersion));
  }
  if (msg["type"] == "ERROR") {
    throw Error(ErrorKind::kProtocol,
                "adapter error: " + (msg.contains("message") ? msg["message"].dump() : std::string("unspecified")));
  }
  if (msg["type"] != type) {
    throw Error(ErrorKind::kProtocol, "expected " + std::string(type) + ", got " + msg["type"].dump());
  }
}

Json message(const char* type) { return {{"type", type}, {"protocol_version", kProtocolVersion}}; }

}  // namespace

AdapterHandshake parse_handshake(const Json& j) {
  require_type(j, "HELLO_OK");
  AdapterHandshake h;
  try {
    h.protocol_version = j.at("protocol_version").get<int>();
    h.method_id = j.at("method_id").get<std::string>();
    std::vector<Param> params;
    for (const auto& p : j.at("params")) {
      params.push_back({p.at("name").get<std::string>(), p.at("default").get<std::int64_t>(),
                        parse_role(p.at("role").get<std::string>())});
    }
    std::vector<DivisibilityConstraint> constraints;
    if (j.contains("constraints")) {
      for (const auto& c : j["constraints"]) {
        constraints.push_back({c.at("dimension").get<std::string>(), c.at("divisor").get<std::string>()});
      }
    }
    h.base_config = DetectorConfig(h.method_id, std::move(params), std::move(constraints));
    const Json& w = j.at("windowing");
    h.windowed = w.at("windowed").get<bool>();
    if (h.windowed) {
      if (w.contains("window_param")) {
        h.window_param = w["window_param"].get<std::string>();
        if (!h.base_config.find(h.window_param)) {
          throw Error(ErrorKind::kProtocol, "window_param names an undeclared parameter");
        }
      } else {
        h.fixed_window = w.at("w").get<std::size_t>();
        if (h.fixed_window == 0) throw Error(ErrorKind::kProtocol, "declared w must be >= 1");
      }
    }
    if (j.contains("capabilities") && j["capabilities"].contains("phase_timings")) {
      h.reports_phase_timings = j["capabilities"]["phase_timings"].get<bool>();
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::kProtocol, std::string("malformed handshake: ") + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kProtocol) throw;
    throw Error(ErrorKind::kProtocol, std::string("invalid handshake: ") + e.what());
  }
  return h;
}

AdapterProcess::AdapterProcess(const AdapterOptions& options, std::size_t thread_cap) {
  static std::once_flag ignore_sigpipe;
  std::call_once(ignore_sigpipe, [] { ::signal(SIGPIPE, SIG_IGN); });

  int in_pipe[2], out_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) != 0) throw Error(ErrorKind::kProtocol, "pipe failed");
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw Error(ErrorKind::kProtocol, "pipe failed");
  }

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in_pipe[0], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, out_pipe[1], STDOUT_FILENO);

  std::vector<std::string> env_storage;
  const std::string cap_prefix = std::string(kThreadCapEnv) + "=";
  for (char** e = environ; *e; ++e) {
    if (std::strncmp(*e, cap_prefix.c_str(), cap_prefix.size()) != 0) env_storage.emplace_back(*e);
  }
  env_storage.push_back(cap_prefix + std::to_string(thread_cap));
  std::vector<char*> envp;
  for (auto& s : env_storage) envp.push_back(s.data());
  envp.push_back(nullptr);

  std::vector<std::string> arg_storage = {options.executable.string()};
  arg_storage.insert(arg_storage.end(), options.args.begin(), options.args.end());
  std::vector<char*> argv;
  for (auto& s : arg_storage) argv.push_back(s.data());
  argv.push_back(nullptr);

  const int rc = ::posix_spawn(&pid_, argv[0], &actions, nullptr, argv.data(), envp.data());
  posix_spawn_file_actions_destroy(&actions);
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  if (rc != 0) {
    ::close(in_pipe[1]);
    ::close(out_pipe[0]);
    pid_ = -1;
    throw Error(ErrorKind::kProtocol,
                "cannot launch adapter " + options.executable.string() + ": " + std::strerror(rc));
  }
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
}

AdapterProcess::~AdapterProcess() { kill(); }

void AdapterProcess::send(const Json& msg) {
  const std::string line = msg.dump() + "\n";
  std::size_t written = 0;
  while (written < line.size()) {
    const ssize_t n = ::write(to_child_, line.data() + written, line.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorKind::kProtocol, std::string("write to adapter failed: ") + std::strerror(errno));
    }
    written += static_cast<std::size_t>(n);
  }
}

Json AdapterProcess::receive(std::chrono::milliseconds timeout) {
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  while (true) {
    const auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      try {
        return Json::parse(line);
      } catch (const Json::exception& e) {
        throw Error(ErrorKind::kProtocol, std::string("malformed message from adapter: ") + e.what());
      }
    }
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) throw Error(ErrorKind::kProtocol, "adapter timed out");
    pollfd pfd{from_child_, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, static_cast<int>(std::min<long long>(left.count(), 1000)));
    if (ready < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorKind::kProtocol, "poll failed");
    }
    if (ready == 0) continue;
    char chunk[65536];
    const ssize_t n = ::read(from_child_, chunk, sizeof(chunk));
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorKind::kProtocol, "read from adapter failed");
    }
    if (n == 0) throw Error(ErrorKind::kProtocol, "adapter closed its output");
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

void AdapterProcess::close() {
  if (pid_ < 0) return;
  try {
    send(message("BYE"));
  } catch (const Error&) {
  }
  ::close(to_child_);
  to_child_ = -1;
  for (int i = 0; i < 100; ++i) {
    int status = 0;
    if (::waitpid(pid_, &status, WNOHANG) == pid_) {
      pid_ = -1;
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  kill();
}

void AdapterProcess::kill() {
  if (pid_ > 0) {
    ::kill(pid_, SIGKILL);
    int status = 0;
    ::waitpid(pid_, &status, 0);
    pid_ = -1;
  }
  if (to_child_ >= 0) ::close(to_child_);
  if (from_child_ >= 0) ::close(from_child_);
  to_child_ = from_child_ = -1;
}

namespace {

Json hello(std::size_t cap) {
  Json m = message("HELLO");
  m["thread_cap"] = cap;
  return m;
}

class WorkDir {
 public:
  explicit WorkDir(const std::filesystem::path& requested) {
    if (!requested.empty()) {
      path_ = requested;
      std::filesystem::create_directories(path_);
      return;
    }
    static std::atomic<unsigned> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("tierbench-adapter-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
    owned_ = true;
  }
  ~WorkDir() {
    if (owned_) {
      std::error_code ec;
      std::filesystem::remove_all(path_, ec);
    }
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  bool owned_ = false;
};

std::vector<double> read_scores(const Json& reply) {
  if (reply.contains("scores")) return reply["scores"].get<std::vector<double>>();
  if (reply.contains("scores_path")) {
    std::ifstream in(reply["scores_path"].get<std::string>());
    if (!in) throw Error(ErrorKind::kProtocol, "cannot read scores_path");
    std::vector<double> scores;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line == "\r") continue;
      scores.push_back(std::stod(line));
    }
    return scores;
  }
  throw Error(ErrorKind::kProtocol, "SCORE_OK carries neither scores nor scores_path");
}

void mark_failed(RunRecord& record, const std::string& reason) {
  record.status = RunStatus::kFailed;
  record.failure_reason = reason;
  record.auc_pr.reset();
  record.score_digest.clear();
}

}  // namespace

AdapterHandshake query_adapter(const AdapterOptions& options) {
  AdapterProcess child(options, 1);
  child.send(hello(1));
  auto h = parse_handshake(child.receive(options.handshake_timeout));
  child.close();
  return h;
}

RunRecord adapter_session(const AdapterOptions& options, const Entity& entity, const TierSpec& tier,
                          std::uint64_t seed, const RunOptions& run_options) {
  std::lock_guard flight(run_slot());
  RunRecord record;
  record.method_id = options.executable.filename().string();
  record.dataset_id = entity.dataset_id;
  record.entity_id = entity.entity_id;
  record.tier = tier;
  record.seed = seed;
  record.length = entity.split.test.size();

  const auto cap = apply_thread_cap(tier.thread_cap, run_options.machine_width);
  record.thread_cap_applied = static_cast<int>(cap.applied);
  record.thread_cap_note = cap.note;

  std::optional<AdapterProcess> child;
  try {
    WorkDir dir(options.work_dir);
    child.emplace(options, cap.applied);
    child->send(hello(cap.applied));
    const AdapterHandshake h = parse_handshake(child->receive(options.handshake_timeout));
    record.method_id = h.method_id;
    record.base_config = h.base_config;
    record.scaled_config = h.base_config;

    auto scaled = scale_config(h.base_config, tier);
    record.scaled_config = std::move(scaled.config);
    record.diff = std::move(scaled.diff);
    const WindowingSpec windowing = h.windowing(record.scaled_config);
    record.window_length = windowing.windowed ? windowing.window_length : 1;
    record.windowed = windowing.windowed;

    const auto train_path = dir.path() / "train.csv";
    const auto test_path = dir.path() / "test.csv";
    write_csv(entity.split.train, train_path);
    write_csv(entity.split.test.series(), test_path);

    Json fit = message("FIT");
    fit["train_path"] = train_path.string();
    fit["params"] = Json::object();
    for (const auto& p : record.scaled_config.params()) fit["params"][p.name] = p.value;
    fit["seed"] = seed;
    Json score = message("SCORE");
    score["test_path"] = test_path.string();

    Stopwatch total, fit_timer, score_timer;
    total.start();
    fit_timer.start();
    child->send(fit);
    const Json fit_ok = child->receive(options.call_timeout);
    fit_timer.pause();
    require_type(fit_ok, "FIT_OK");
    if (h.reports_phase_timings && fit_ok.contains("fit_time_s") && fit_ok["fit_time_s"].is_number()) {
      record.timing.reported_fit_time_s = fit_ok["fit_time_s"].get<double>();
    }
    if (run_options.warmup) {
      total.pause();
      child->send(score);
      require_type(child->receive(options.call_timeout), "SCORE_OK");
      total.start();
      record.timing.warmup = true;
    }
    score_timer.start();
    child->send(score);
    const Json score_ok = child->receive(options.call_timeout);
    score_timer.pause();
    total.pause();
    require_type(score_ok, "SCORE_OK");
    if (h.reports_phase_timings && score_ok.contains("infer_time_s") && score_ok["infer_time_s"].is_number()) {
      record.timing.reported_infer_time_s = score_ok["infer_time_s"].get<double>();
    }
    const std::vector<double> scores = read_scores(score_ok);
    child->close();

    record.timing.fit_time_s = fit_timer.seconds();
    record.timing.total_time_s = total.seconds();
    // The SCORE round-trip is always timed in isolation.
    if (run_options.instrument_phases) {
      record.timing.infer_time_s = score_timer.seconds();
      record.timing.t_inf_source = TInfSource::kInstrumented;
    }
    finish_scoring(record, scores, entity.split.test, windowing);
  } catch (const std::exception& e) {
    if (child) child->kill();
    mark_failed(record, e.what());
  }
  return record;
}

}  // namespace tierbench
