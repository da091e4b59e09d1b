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

#include <algorithm>
#include <cmath>

#include "builtin.hpp"
#include "tierbench/error.hpp"

namespace tierbench::detail {
namespace {

struct FeatureHistogram {
  double lo = 0.0;
  double width = 0.0;  // 0 marks a constant feature
  std::vector<double> neg_log_density;
};

class HbosModel final : public Model {
 public:
  explicit HbosModel(std::vector<FeatureHistogram> features) : features_(std::move(features)) {}

  std::vector<double> score(const TimeSeries& test, ComputePool& pool) const override {
    if (test.cols() != features_.size()) throw Error(ErrorKind::kStructural, "hbos: feature count mismatch");
    std::vector<double> out(test.rows(), 0.0);
    pool.parallel_for(test.rows(), [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        auto row = test.row(i);
        double s = 0.0;
        for (std::size_t j = 0; j < features_.size(); ++j) {
          const auto& f = features_[j];
          if (f.width == 0.0) continue;
          const auto bins = static_cast<double>(f.neg_log_density.size());
          double pos = std::floor((row[j] - f.lo) / f.width);
          pos = std::clamp(pos, 0.0, bins - 1.0);
          s += f.neg_log_density[static_cast<std::size_t>(pos)];
        }
        out[i] = s;
      }
    });
    return out;
  }

 private:
  std::vector<FeatureHistogram> features_;
};

class Hbos final : public Detector {
 public:
  std::string_view id() const override { return "hbos"; }

  DetectorConfig default_config(std::size_t) const override {
    return DetectorConfig("hbos", {{"n_bins", 40, ScalingRole::kWork}});
  }

  std::unique_ptr<Model> fit(const TimeSeries& train, const DetectorConfig& config, std::uint64_t,
                             ComputePool& pool) const override {
    const std::int64_t n_bins = config.value("n_bins");
    if (n_bins < 1) throw Error(ErrorKind::kConfig, "hbos: n_bins must be >= 1");
    if (train.empty()) throw Error(ErrorKind::kConfig, "hbos: empty training data");
    const auto bins = static_cast<std::size_t>(n_bins);
    const double n = static_cast<double>(train.rows());
    std::vector<FeatureHistogram> features(train.cols());
    pool.parallel_for(train.cols(), [&](std::size_t b, std::size_t e) {
      for (std::size_t j = b; j < e; ++j) {
        double lo = train.at(0, j), hi = lo;
        for (std::size_t i = 1; i < train.rows(); ++i) {
          lo = std::min(lo, train.at(i, j));
          hi = std::max(hi, train.at(i, j));
        }
        FeatureHistogram& f = features[j];
        f.lo = lo;
        if (hi == lo) continue;
        f.width = (hi - lo) / static_cast<double>(bins);
        std::vector<std::size_t> counts(bins, 0);
        for (std::size_t i = 0; i < train.rows(); ++i) {
          double pos = std::floor((train.at(i, j) - lo) / f.width);
          pos = std::clamp(pos, 0.0, static_cast<double>(bins) - 1.0);
          ++counts[static_cast<std::size_t>(pos)];
        }
        f.neg_log_density.resize(bins);
        for (std::size_t k = 0; k < bins; ++k) {
          const double density = (static_cast<double>(counts[k]) + 1.0) / (n + static_cast<double>(bins));
          f.neg_log_density[k] = -std::log(density);
        }
      }
    });
    return std::make_unique<HbosModel>(std::move(features));
  }
};

}  // namespace

std::unique_ptr<Detector> make_hbos() { return std::make_unique<Hbos>(); }

}  // namespace tierbench::detail
