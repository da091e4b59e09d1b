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

#include "tierbench/audit.hpp"

#include <fstream>

#include "tierbench/error.hpp"

namespace tierbench {

bool is_batch_header(const Json& j) {
  return j.is_object() && j.contains("record_type") && j["record_type"] == "batch_header";
}

AuditLog::AuditLog(std::filesystem::path path) : path_(std::move(path)) {}

void AuditLog::append_line(const std::string& line) {
  std::ofstream out(path_, std::ios::binary | std::ios::app);
  if (!out) throw Error(ErrorKind::kData, "cannot open run log " + path_.string() + " for append");
  out << line << '\n';
  out.flush();
  if (!out) throw Error(ErrorKind::kData, "write failed for run log " + path_.string());
}

void AuditLog::emit_json(const Json& line) {
  if (!is_batch_header(line)) {
    auto problems = schema_problems(line);
    if (!problems.empty()) {
      std::string msg = "refusing to write invalid audit record:";
      for (const auto& p : problems) msg += " " + p + ";";
      throw Error(ErrorKind::kSchema, msg);
    }
  }
  append_line(line.dump());
}

void AuditLog::emit(const RunRecord& record) { emit_json(to_json(record)); }

std::filesystem::path batch_log_path(const std::filesystem::path& run_log) {
  return run_log.string() + ".batches.jsonl";
}

void AuditLog::emit_header(const Json& header) {
  Json h = header;
  h["record_type"] = "batch_header";
  append_line(h.dump());
}

void emit_audit(const RunRecord& record, const std::filesystem::path& path) {
  AuditLog(path).emit(record);
}

ParsedLog read_run_log(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kData, "cannot open run log " + path.string());
  ParsedLog out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const bool terminated = !in.eof();
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::exception& e) {
      out.problems.push_back({line_no, std::string(terminated ? "malformed JSON: " : "truncated final line: ") +
                                           e.what()});
      continue;
    }
    if (is_batch_header(j)) {
      out.headers.push_back(std::move(j));
      continue;
    }
    auto problems = schema_problems(j);
    if (!problems.empty()) {
      std::string msg;
      for (const auto& p : problems) msg += (msg.empty() ? "" : "; ") + p;
      out.problems.push_back({line_no, msg});
      continue;
    }
    out.records.push_back(record_from_json(j));
    out.record_lines.push_back(line_no);
    out.schema_versions.insert(out.records.back().schema_version);
  }
  return out;
}

}  // namespace tierbench
