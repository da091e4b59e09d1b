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

struct FeatureEcdf {
  std::vector<double> sorted;
  bool left_skewed = false;
};

class CopodModel final : public Model {
 public:
  CopodModel(std::vector<FeatureEcdf> features, std::size_t n)
      : features_(std::move(features)), n_(static_cast<double>(n)), floor_(1.0 / (n_ + 1.0)) {}

  // max over {left tail, right tail, skewness-selected tail} of sum_j -log p.
  std::vector<double> score(const TimeSeries& test, ComputePool& pool) const override {
    if (test.cols() != features_.size()) throw Error(ErrorKind::kStructural, "copod: feature count mismatch");
    std::vector<double> out(test.rows(), 0.0);
    pool.parallel_for(test.rows(), [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        auto row = test.row(i);
        double left = 0.0, right = 0.0, skew = 0.0;
        for (std::size_t j = 0; j < features_.size(); ++j) {
          const auto& s = features_[j].sorted;
          const auto at_most = static_cast<double>(std::upper_bound(s.begin(), s.end(), row[j]) - s.begin());
          const auto at_least =
              static_cast<double>(s.end() - std::lower_bound(s.begin(), s.end(), row[j]));
          const double nl = -std::log(std::max(at_most / n_, floor_));
          const double nr = -std::log(std::max(at_least / n_, floor_));
          left += nl;
          right += nr;
          skew += features_[j].left_skewed ? nl : nr;
        }
        out[i] = std::max({left, right, skew});
      }
    });
    return out;
  }

 private:
  std::vector<FeatureEcdf> features_;
  double n_;
  double floor_;
};

double sample_skewness(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= n;
  double m2 = 0.0, m3 = 0.0;
  for (double x : v) {
    const double d = x - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= n;
  m3 /= n;
  if (m2 <= 0.0) return 0.0;
  return m3 / std::pow(m2, 1.5);
}

class Copod final : public Detector {
 public:
  std::string_view id() const override { return "copod"; }

  DetectorConfig default_config(std::size_t) const override { return DetectorConfig("copod", {}); }

  std::unique_ptr<Model> fit(const TimeSeries& train, const DetectorConfig&, std::uint64_t,
                             ComputePool& pool) const override {
    if (train.empty()) throw Error(ErrorKind::kConfig, "copod: empty training data");
    std::vector<FeatureEcdf> features(train.cols());
    pool.parallel_for(train.cols(), [&](std::size_t b, std::size_t e) {
      for (std::size_t j = b; j < e; ++j) {
        auto col = train.column(j);
        features[j].left_skewed = sample_skewness(col) < 0.0;
        std::sort(col.begin(), col.end());
        features[j].sorted = std::move(col);
      }
    });
    return std::make_unique<CopodModel>(std::move(features), train.rows());
  }
};

}  // namespace

std::unique_ptr<Detector> make_copod() { return std::make_unique<Copod>(); }

}  // namespace tierbench::detail
