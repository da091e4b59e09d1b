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

// Scripted adapter used by the adapter-host tests. The first argument picks
// the behaviour:
//   echo        pointwise, scores = first column, inline
//   file        as echo, scores written to a file
//   zscore      windowed via window_len (WINDOW role); moving z-score of column 0
//   short       one score too few
//   hang        never answers SCORE
//   error       answers FIT with ERROR
//   crash       exits on FIT
//   constraint  embed/heads with a divisibility constraint; checks FIT params
//   envcheck    FIT fails unless the thread-cap variable matches HELLO

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>

#include <json.hpp>

#include "tierbench/compute_pool.hpp"
#include "tierbench/data.hpp"

using Json = nlohmann::json;

namespace {

Json msg(const char* type) { return {{"type", type}, {"protocol_version", 1}}; }

void reply(const Json& j) { std::cout << j.dump() << std::endl; }

std::vector<double> moving_zscore(const tierbench::TimeSeries& ts, std::size_t w) {
  std::vector<double> out;
  for (std::size_t end = w; end <= ts.rows(); ++end) {
    double mean = 0.0;
    for (std::size_t t = end - w; t < end; ++t) mean += ts.at(t, 0);
    mean /= static_cast<double>(w);
    double var = 0.0;
    for (std::size_t t = end - w; t < end; ++t) var += (ts.at(t, 0) - mean) * (ts.at(t, 0) - mean);
    const double sd = std::max(std::sqrt(var / static_cast<double>(w)), 1e-12);
    out.push_back(std::abs(ts.at(end - 1, 0) - mean) / sd);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string mode = argc > 1 ? argv[1] : "echo";
  std::size_t window = 1;
  long hello_cap = -1;
  for (std::string line; std::getline(std::cin, line);) {
    const Json in = Json::parse(line);
    const std::string type = in.at("type");
    if (type == "HELLO") {
      hello_cap = in.at("thread_cap").get<long>();
      Json out = msg("HELLO_OK");
      out["method_id"] = "fake-" + mode;
      out["params"] = Json::array();
      out["windowing"] = {{"windowed", false}};
      out["capabilities"] = {{"phase_timings", true}};
      if (mode == "zscore") {
        out["params"].push_back({{"name", "window_len"}, {"default", 64}, {"role", "WINDOW"}});
        out["windowing"] = {{"windowed", true}, {"window_param", "window_len"}};
      } else if (mode == "constraint") {
        out["params"].push_back({{"name", "embed"}, {"default", 32}, {"role", "WIDTH"}});
        out["params"].push_back({{"name", "heads"}, {"default", 6}, {"role", "HEADS"}});
        out["constraints"] = Json::array({{{"dimension", "embed"}, {"divisor", "heads"}}});
      } else {
        out["params"].push_back({{"name", "budget"}, {"default", 40}, {"role", "WORK"}});
      }
      reply(out);
    } else if (type == "FIT") {
      if (mode == "crash") return 3;
      if (mode == "error") {
        Json e = msg("ERROR");
        e["message"] = "cannot fit this";
        reply(e);
        continue;
      }
      const auto& params = in.at("params");
      if (mode == "constraint" && params.at("embed").get<long>() % params.at("heads").get<long>() != 0) {
        Json e = msg("ERROR");
        e["message"] = "heads does not divide embed";
        reply(e);
        continue;
      }
      if (mode == "envcheck") {
        const char* env = std::getenv(tierbench::kThreadCapEnv);
        if (!env || std::stol(env) != hello_cap) {
          Json e = msg("ERROR");
          e["message"] = "thread cap variable does not match HELLO";
          reply(e);
          continue;
        }
      }
      if (mode == "zscore") window = params.at("window_len").get<std::size_t>();
      (void)tierbench::load_csv(in.at("train_path").get<std::string>(), false);
      Json out = msg("FIT_OK");
      out["fit_time_s"] = 0.001;
      reply(out);
    } else if (type == "SCORE") {
      if (mode == "hang") {
        std::this_thread::sleep_for(std::chrono::hours(1));
      }
      const auto test = tierbench::load_csv(in.at("test_path").get<std::string>(), false);
      std::vector<double> scores = mode == "zscore" ? moving_zscore(test, window) : test.column(0);
      if (mode == "short") scores.pop_back();
      Json out = msg("SCORE_OK");
      out["infer_time_s"] = 0.002;
      if (mode == "file") {
        const std::string path = in.at("test_path").get<std::string>() + ".scores";
        std::ofstream f(path);
        f.precision(17);
        for (double s : scores) f << s << '\n';
        out["scores_path"] = path;
      } else {
        out["scores"] = scores;
      }
      reply(out);
    } else if (type == "BYE") {
      return 0;
    }
  }
  return 0;
}
