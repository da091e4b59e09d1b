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

#include <Eigen/Dense>

#include "builtin.hpp"
#include "tierbench/error.hpp"

namespace tierbench::detail {
namespace {

class PcaModel final : public Model {
 public:
  PcaModel(Eigen::VectorXd mean, Eigen::VectorXd scale, Eigen::MatrixXd axes)
      : mean_(std::move(mean)), scale_(std::move(scale)), axes_(std::move(axes)) {}

  std::vector<double> score(const TimeSeries& test, ComputePool& pool) const override {
    const auto d = static_cast<std::size_t>(mean_.size());
    if (test.cols() != d) throw Error(ErrorKind::kStructural, "pca: feature count mismatch");
    std::vector<double> out(test.rows(), 0.0);
    pool.parallel_for(test.rows(), [&](std::size_t b, std::size_t e) {
      Eigen::VectorXd z(static_cast<Eigen::Index>(d));
      for (std::size_t i = b; i < e; ++i) {
        auto row = test.row(i);
        for (std::size_t j = 0; j < d; ++j) {
          const auto jj = static_cast<Eigen::Index>(j);
          z(jj) = (row[j] - mean_(jj)) / scale_(jj);
        }
        const Eigen::VectorXd residual = z - axes_ * (axes_.transpose() * z);
        out[i] = residual.squaredNorm();
      }
    });
    return out;
  }

 private:
  Eigen::VectorXd mean_;
  Eigen::VectorXd scale_;
  Eigen::MatrixXd axes_;  // d x k, columns are principal axes
};

class Pca final : public Detector {
 public:
  std::string_view id() const override { return "pca"; }

  DetectorConfig default_config(std::size_t n_features) const override {
    const auto k = static_cast<std::int64_t>(std::max<std::size_t>(1, n_features / 2));
    return DetectorConfig("pca", {{"n_components", k, ScalingRole::kWidth},
                                  {"max_fit_rows", 2048, ScalingRole::kWork}});
  }

  std::unique_ptr<Model> fit(const TimeSeries& train, const DetectorConfig& config, std::uint64_t,
                             ComputePool&) const override {
    const std::int64_t k = config.value("n_components");
    const std::size_t d = train.cols();
    if (k < 1 || static_cast<std::size_t>(k) > d) {
      throw Error(ErrorKind::kConfig, "pca: n_components=" + std::to_string(k) + " must lie in [1, " +
                                          std::to_string(d) + "]");
    }
    if (train.rows() < 2) throw Error(ErrorKind::kConfig, "pca: need at least two training rows");

    std::size_t rows = train.rows();
    if (const Param* cap = config.find("max_fit_rows")) {
      rows = std::min(rows, static_cast<std::size_t>(cap->value));
    }
    rows = std::max<std::size_t>(rows, 2);
    const auto n = static_cast<Eigen::Index>(rows);
    const auto dd = static_cast<Eigen::Index>(d);
    Eigen::MatrixXd x(n, dd);
    for (std::size_t r = 0; r < rows; ++r) {
      // Evenly strided subset; the identity when rows == T_train.
      const std::size_t src = r * train.rows() / rows;
      for (std::size_t j = 0; j < d; ++j) {
        x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = train.at(src, j);
      }
    }

    Eigen::VectorXd mean = x.colwise().mean().transpose();
    x.rowwise() -= mean.transpose();
    Eigen::VectorXd scale = (x.colwise().squaredNorm() / static_cast<double>(rows)).cwiseSqrt().transpose();
    for (Eigen::Index j = 0; j < dd; ++j) {
      if (!(scale(j) > 0.0)) scale(j) = 1.0;
      x.col(j) /= scale(j);
    }
    const Eigen::MatrixXd cov = (x.transpose() * x) / static_cast<double>(rows - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success) throw Error(ErrorKind::kData, "pca: eigendecomposition failed");

    // Descending eigenvalue; ties keep the solver's column order reversed.
    std::vector<Eigen::Index> order(static_cast<std::size_t>(dd));
    std::iota(order.begin(), order.end(), 0);
    const auto& values = solver.eigenvalues();
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
      return values(a) > values(b) || (values(a) == values(b) && a > b);
    });

    Eigen::MatrixXd axes(dd, static_cast<Eigen::Index>(k));
    for (Eigen::Index c = 0; c < static_cast<Eigen::Index>(k); ++c) {
      Eigen::VectorXd v = solver.eigenvectors().col(order[static_cast<std::size_t>(c)]);
      Eigen::Index lead = 0;
      for (Eigen::Index j = 1; j < dd; ++j) {
        if (std::abs(v(j)) > std::abs(v(lead))) lead = j;
      }
      if (v(lead) < 0.0) v = -v;
      axes.col(c) = v;
    }
    return std::make_unique<PcaModel>(std::move(mean), std::move(scale), std::move(axes));
  }
};

}  // namespace

std::unique_ptr<Detector> make_pca() { return std::make_unique<Pca>(); }

}  // namespace tierbench::detail
