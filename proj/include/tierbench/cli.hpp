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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "tierbench/harness.hpp"
#include "tierbench/ladder.hpp"

namespace tierbench::cli {

enum ExitCode : int { kOk = 0, kUsageError = 1, kDataError = 2, kSchemaError = 3 };

// A method is a built-in id or "adapter:<path to executable>".
struct MethodSpec {
  std::string name;
  std::filesystem::path adapter;  // empty for built-ins
  bool is_adapter() const { return !adapter.empty(); }
};

MethodSpec parse_method(const std::string& token);

struct BatchPlan {
  std::vector<std::string> datasets;
  std::string format = "synthetic";  // csv | smd | synthetic
  std::string dataset_id;            // defaults per format
  bool has_header = false;
  double train_frac = 0.5;
  double val_frac = 0.2;
  std::vector<MethodSpec> methods;
  std::vector<TierSpec> tiers;
  std::vector<std::uint64_t> seeds;
  std::filesystem::path out;
  bool resume = false;
  RunOptions run_options;
};

// Synthetic dataset spec "T=4000,d=4,rate=0.02,entities=3,seed=1".
std::vector<Entity> load_entities(const BatchPlan& plan);

// Entry point shared by the tierbench binary and the tests; args exclude argv[0].
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tierbench::cli
