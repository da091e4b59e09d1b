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
#include <limits>

#include "builtin.hpp"
#include "tierbench/error.hpp"

namespace tierbench::detail {
namespace {

// Reachability sums of zero (duplicated points) are clamped to this before
// inverting.
constexpr double kMinReach = std::numeric_limits<double>::epsilon();

struct Neighbour {
  double dist2;
  std::size_t index;
  bool operator<(const Neighbour& o) const {
    return dist2 < o.dist2 || (dist2 == o.dist2 && index < o.index);
  }
};

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double d = a[j] - b[j];
    s += d * d;
  }
  return s;
}

// k nearest train rows to `query`, ascending by (distance, index). `skip` is a
// train index excluded from the search (the query itself during fit).
std::vector<Neighbour> nearest(const TimeSeries& train, std::span<const double> query, std::size_t k,
                               std::size_t skip, std::vector<Neighbour>& scratch) {
  scratch.clear();
  for (std::size_t i = 0; i < train.rows(); ++i) {
    if (i == skip) continue;
    scratch.push_back({squared_distance(query, train.row(i)), i});
  }
  std::partial_sort(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(k), scratch.end());
  return {scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(k)};
}

double local_reach_density(const std::vector<Neighbour>& nn, const std::vector<double>& k_distance) {
  double reach = 0.0;
  for (const auto& n : nn) reach += std::max(k_distance[n.index], std::sqrt(n.dist2));
  reach /= static_cast<double>(nn.size());
  return 1.0 / std::max(reach, kMinReach);
}

class LofModel final : public Model {
 public:
  LofModel(TimeSeries train, std::size_t k, std::vector<double> k_distance, std::vector<double> lrd)
      : train_(std::move(train)), k_(k), k_distance_(std::move(k_distance)), lrd_(std::move(lrd)) {}

  std::vector<double> score(const TimeSeries& test, ComputePool& pool) const override {
    if (test.cols() != train_.cols()) throw Error(ErrorKind::kStructural, "lof: feature count mismatch");
    std::vector<double> out(test.rows(), 0.0);
    pool.parallel_for(test.rows(), [&](std::size_t b, std::size_t e) {
      std::vector<Neighbour> scratch;
      for (std::size_t i = b; i < e; ++i) {
        auto nn = nearest(train_, test.row(i), k_, train_.rows(), scratch);
        const double own = local_reach_density(nn, k_distance_);
        double ratio = 0.0;
        for (const auto& n : nn) ratio += lrd_[n.index] / own;
        out[i] = ratio / static_cast<double>(k_);
      }
    });
    return out;
  }

 private:
  TimeSeries train_;
  std::size_t k_;
  std::vector<double> k_distance_;
  std::vector<double> lrd_;
};

class Lof final : public Detector {
 public:
  std::string_view id() const override { return "lof"; }

  DetectorConfig default_config(std::size_t) const override {
    return DetectorConfig("lof", {{"n_neighbors", 20, ScalingRole::kWork}});
  }

  std::unique_ptr<Model> fit(const TimeSeries& train, const DetectorConfig& config, std::uint64_t,
                             ComputePool& pool) const override {
    const std::int64_t k_param = config.value("n_neighbors");
    if (k_param < 1 || static_cast<std::size_t>(k_param) >= train.rows()) {
      throw Error(ErrorKind::kConfig, "lof: n_neighbors=" + std::to_string(k_param) +
                                          " must lie in [1, T_train-1] with T_train=" +
                                          std::to_string(train.rows()));
    }
    const auto k = static_cast<std::size_t>(k_param);
    const std::size_t n = train.rows();
    std::vector<std::vector<Neighbour>> neighbours(n);
    std::vector<double> k_distance(n);
    pool.parallel_for(n, [&](std::size_t b, std::size_t e) {
      std::vector<Neighbour> scratch;
      for (std::size_t i = b; i < e; ++i) {
        neighbours[i] = nearest(train, train.row(i), k, i, scratch);
        k_distance[i] = std::sqrt(neighbours[i].back().dist2);
      }
    });
    std::vector<double> lrd(n);
    pool.parallel_for(n, [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) lrd[i] = local_reach_density(neighbours[i], k_distance);
    });
    return std::make_unique<LofModel>(train, k, std::move(k_distance), std::move(lrd));
  }
};

}  // namespace

std::unique_ptr<Detector> make_lof() { return std::make_unique<Lof>(); }

}  // namespace tierbench::detail
