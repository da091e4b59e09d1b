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
#include <numeric>
#include <optional>
#include <random>

#include "builtin.hpp"
#include "tierbench/error.hpp"

namespace tierbench::detail {
namespace {

constexpr double kEulerGamma = 0.5772156649015329;

// Average path length of an unsuccessful BST search over n points.
double average_path_length(std::size_t n) {
  if (n <= 1) return 0.0;
  if (n == 2) return 1.0;
  const double m = static_cast<double>(n);
  return 2.0 * (std::log(m - 1.0) + kEulerGamma) - 2.0 * (m - 1.0) / m;
}

struct Node {
  std::int32_t feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  std::size_t size = 0;
};

class Tree {
 public:
  Tree(const TimeSeries& data, std::vector<std::size_t> rows, std::size_t height_limit,
       std::mt19937_64& rng) {
    grow(data, rows, 0, rows.size(), 0, height_limit, rng);
  }

  double path_length(std::span<const double> x) const {
    std::size_t node = 0;
    double depth = 0.0;
    while (nodes_[node].feature >= 0) {
      const Node& n = nodes_[node];
      node = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] < n.threshold ? n.left : n.right);
      depth += 1.0;
    }
    return depth + average_path_length(nodes_[node].size);
  }

 private:
  std::int32_t grow(const TimeSeries& data, std::vector<std::size_t>& rows, std::size_t begin,
                    std::size_t end, std::size_t depth, std::size_t limit, std::mt19937_64& rng) {
    const auto id = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back({});
    nodes_[static_cast<std::size_t>(id)].size = end - begin;
    if (depth >= limit || end - begin <= 1) return id;

    // Split only on features that vary inside this node.
    std::vector<std::size_t> candidates;
    std::vector<std::pair<double, double>> ranges;
    for (std::size_t j = 0; j < data.cols(); ++j) {
      double lo = data.at(rows[begin], j), hi = lo;
      for (std::size_t r = begin + 1; r < end; ++r) {
        lo = std::min(lo, data.at(rows[r], j));
        hi = std::max(hi, data.at(rows[r], j));
      }
      if (hi > lo) {
        candidates.push_back(j);
        ranges.emplace_back(lo, hi);
      }
    }
    if (candidates.empty()) return id;

    const std::size_t pick = std::uniform_int_distribution<std::size_t>(0, candidates.size() - 1)(rng);
    const std::size_t feature = candidates[pick];
    const double threshold = std::uniform_real_distribution<double>(ranges[pick].first, ranges[pick].second)(rng);
    auto mid = std::partition(rows.begin() + static_cast<std::ptrdiff_t>(begin),
                              rows.begin() + static_cast<std::ptrdiff_t>(end),
                              [&](std::size_t r) { return data.at(r, feature) < threshold; });
    const auto split = static_cast<std::size_t>(mid - rows.begin());

    const std::int32_t left = grow(data, rows, begin, split, depth + 1, limit, rng);
    const std::int32_t right = grow(data, rows, split, end, depth + 1, limit, rng);
    Node& n = nodes_[static_cast<std::size_t>(id)];
    n.feature = static_cast<std::int32_t>(feature);
    n.threshold = threshold;
    n.left = left;
    n.right = right;
    return id;
  }

  std::vector<Node> nodes_;
};

class IForestModel final : public Model {
 public:
  IForestModel(std::vector<Tree> trees, std::size_t samples, std::size_t cols)
      : trees_(std::move(trees)), norm_(average_path_length(samples)), cols_(cols) {}

  std::vector<double> score(const TimeSeries& test, ComputePool& pool) const override {
    if (test.cols() != cols_) throw Error(ErrorKind::kStructural, "iforest: feature count mismatch");
    std::vector<double> out(test.rows(), 0.0);
    const double count = static_cast<double>(trees_.size());
    pool.parallel_for(test.rows(), [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        double total = 0.0;
        for (const auto& t : trees_) total += t.path_length(test.row(i));
        out[i] = std::exp2(-(total / count) / norm_);
      }
    });
    return out;
  }

 private:
  std::vector<Tree> trees_;
  double norm_;
  std::size_t cols_;
};

class IForest final : public Detector {
 public:
  std::string_view id() const override { return "iforest"; }

  // random_state pins the forest independently of the run seed, so repeated
  // seeds reproduce the same model.
  DetectorConfig default_config(std::size_t) const override {
    return DetectorConfig("iforest", {{"n_estimators", 100, ScalingRole::kWork},
                                      {"max_samples", 256, ScalingRole::kWork},
                                      {"random_state", 42, ScalingRole::kUnscaled}});
  }

  std::unique_ptr<Model> fit(const TimeSeries& train, const DetectorConfig& config, std::uint64_t seed,
                             ComputePool& pool) const override {
    const std::int64_t estimators = config.value("n_estimators");
    const std::int64_t samples = config.value("max_samples");
    if (estimators < 1) throw Error(ErrorKind::kConfig, "iforest: n_estimators must be >= 1");
    if (samples < 2) throw Error(ErrorKind::kConfig, "iforest: max_samples must be >= 2");
    if (static_cast<std::size_t>(samples) > train.rows()) {
      throw Error(ErrorKind::kConfig, "iforest: max_samples=" + std::to_string(samples) +
                                          " exceeds T_train=" + std::to_string(train.rows()));
    }
    const std::uint64_t master =
        config.find("random_state") ? static_cast<std::uint64_t>(config.value("random_state")) : seed;
    const auto psi = static_cast<std::size_t>(samples);
    const auto height = static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(psi))));

    std::vector<std::optional<Tree>> built(static_cast<std::size_t>(estimators));
    pool.parallel_for(built.size(), [&](std::size_t b, std::size_t e) {
      std::vector<std::size_t> all(train.rows());
      for (std::size_t t = b; t < e; ++t) {
        std::mt19937_64 rng(derive_seed(master, t));
        std::iota(all.begin(), all.end(), 0);
        // Partial Fisher-Yates: the first psi entries form the subsample.
        for (std::size_t i = 0; i < psi; ++i) {
          const std::size_t j = std::uniform_int_distribution<std::size_t>(i, all.size() - 1)(rng);
          std::swap(all[i], all[j]);
        }
        built[t].emplace(train, std::vector<std::size_t>(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(psi)),
                         height, rng);
      }
    });
    std::vector<Tree> trees;
    trees.reserve(built.size());
    for (auto& t : built) trees.push_back(std::move(*t));
    return std::make_unique<IForestModel>(std::move(trees), psi, train.cols());
  }
};

}  // namespace

std::unique_ptr<Detector> make_iforest() { return std::make_unique<IForest>(); }

}  // namespace tierbench::detail
