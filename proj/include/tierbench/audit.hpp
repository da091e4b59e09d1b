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

#include <cstddef>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "tierbench/record.hpp"

namespace tierbench {

// Append-only run log: one JSON object per line. Lines are run records; batch
// headers ({"record_type": "batch_header", ...}) are accepted when read.
class AuditLog {
 public:
  explicit AuditLog(std::filesystem::path path);

  // Throws kSchema (and writes nothing) when the record does not validate.
  void emit(const RunRecord& record);
  // Validated as a run record unless it is a batch header.
  void emit_json(const Json& line);
  void emit_header(const Json& header);

  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  void append_line(const std::string& line);

  std::filesystem::path path_;
};

void emit_audit(const RunRecord& record, const std::filesystem::path& path);

struct LogProblem {
  std::size_t line = 0;
  std::string message;
};

struct ParsedLog {
  std::vector<RunRecord> records;
  std::vector<std::size_t> record_lines;  // 1-based line of each record
  std::vector<Json> headers;
  std::vector<LogProblem> problems;
  std::set<int> schema_versions;
};

// Reads every line; invalid lines are reported in `problems`, never thrown.
ParsedLog read_run_log(const std::filesystem::path& path);

bool is_batch_header(const Json& j);

// Batch headers written by the CLI go here, keeping the run log to exactly
// one line per run.
std::filesystem::path batch_log_path(const std::filesystem::path& run_log);

}  // namespace tierbench
