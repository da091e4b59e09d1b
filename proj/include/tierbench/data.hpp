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
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace tierbench {

// Dense T x d matrix of finite reals, row-major, rows in temporal order.
class TimeSeries {
 public:
  TimeSeries() = default;
  // Throws kStructural on empty shape or size mismatch, kData on non-finite cells.
  TimeSeries(std::size_t rows, std::size_t cols, std::vector<double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0; }

  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * cols_, cols_};
  }
  double at(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }
  const std::vector<double>& values() const noexcept { return values_; }

  // Rows [begin, end). An empty slice is allowed and keeps the column count.
  TimeSeries slice(std::size_t begin, std::size_t end) const;

  // Column j copied out.
  std::vector<double> column(std::size_t j) const;

  bool operator==(const TimeSeries&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

class LabeledSeries {
 public:
  LabeledSeries() = default;
  LabeledSeries(TimeSeries series, std::vector<std::uint8_t> labels);

  const TimeSeries& series() const noexcept { return series_; }
  const std::vector<std::uint8_t>& labels() const noexcept { return labels_; }
  double anomaly_rate() const noexcept { return anomaly_rate_; }
  std::size_t size() const noexcept { return series_.rows(); }

  LabeledSeries slice(std::size_t begin, std::size_t end) const;

  bool operator==(const LabeledSeries&) const = default;

 private:
  TimeSeries series_;
  std::vector<std::uint8_t> labels_;
  double anomaly_rate_ = 0.0;
};

struct WindowingSpec {
  std::size_t window_length = 1;
  bool windowed = false;

  static WindowingSpec pointwise() { return {1, false}; }
  static WindowingSpec sliding(std::size_t w) { return {w, true}; }
};

// Number of scored units: T - w + 1 for windowed methods, T otherwise.
std::size_t window_count(std::size_t length, const WindowingSpec& spec);

TimeSeries load_csv(const std::filesystem::path& path, bool has_header);
LabeledSeries load_smd(const std::filesystem::path& data_path,
                       const std::filesystem::path& label_path);

// Headerless CSV whose last column is the 0/1 label.
LabeledSeries load_labeled_csv(const std::filesystem::path& path, bool has_header);

// Shortest round-trip decimal representation, one row per line.
void write_csv(const TimeSeries& series, const std::filesystem::path& path);
std::string format_csv(const TimeSeries& series);

struct Split {
  TimeSeries train;
  TimeSeries val;
  LabeledSeries test;
  // Row offsets into the source series.
  std::size_t train_begin = 0, val_begin = 0, test_begin = 0, end = 0;
};

Split split_contiguous(const LabeledSeries& source, double train_frac,
                       double val_frac_of_train);

struct SyntheticOptions {
  std::size_t length = 4000;
  std::size_t channels = 4;
  double target_rate = 0.02;
  std::uint64_t seed = 0;
};

// Seeded sinusoid plus Gaussian noise with injected spike / level-shift intervals.
LabeledSeries generate_synthetic(const SyntheticOptions& options);

// Clean signal (no noise, no anomalies) and noise sigma used by generate_synthetic;
// exposed for property checks.
struct SyntheticTruth {
  TimeSeries clean;
  double noise_sigma = 0.0;
};
SyntheticTruth synthetic_truth(const SyntheticOptions& options);

}  // namespace tierbench
