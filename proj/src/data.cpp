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

#include "tierbench/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "tierbench/error.hpp"

namespace tierbench {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kStructural: return "structural";
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kInvalidSplit: return "invalid-split";
    case ErrorKind::kInvalidWindow: return "invalid-window";
    case ErrorKind::kConfig: return "config";
    case ErrorKind::kRepairFailure: return "repair-failure";
    case ErrorKind::kUndefinedMetric: return "undefined-metric";
    case ErrorKind::kData: return "data";
    case ErrorKind::kSchema: return "schema";
    case ErrorKind::kProtocol: return "protocol";
    case ErrorKind::kProtocolViolation: return "protocol-violation";
    case ErrorKind::kUsage: return "usage";
  }
  return "unknown";
}

TimeSeries::TimeSeries(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (cols_ == 0) throw Error(ErrorKind::kStructural, "time series needs at least one column");
  if (values_.size() != rows_ * cols_) {
    throw Error(ErrorKind::kStructural, "time series storage does not match its shape");
  }
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!std::isfinite(values_[k])) {
      throw Error(ErrorKind::kData, "non-finite value at row " + std::to_string(k / cols_ + 1) +
                                        ", column " + std::to_string(k % cols_ + 1));
    }
  }
}

TimeSeries TimeSeries::slice(std::size_t begin, std::size_t end) const {
  if (begin > end || end > rows_) throw Error(ErrorKind::kStructural, "slice out of range");
  std::vector<double> out(values_.begin() + static_cast<std::ptrdiff_t>(begin * cols_),
                          values_.begin() + static_cast<std::ptrdiff_t>(end * cols_));
  return TimeSeries(end - begin, cols_, std::move(out));
}

std::vector<double> TimeSeries::column(std::size_t j) const {
  std::vector<double> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = at(i, j);
  return out;
}

LabeledSeries::LabeledSeries(TimeSeries series, std::vector<std::uint8_t> labels)
    : series_(std::move(series)), labels_(std::move(labels)) {
  if (labels_.size() != series_.rows()) {
    throw Error(ErrorKind::kStructural,
                "label count " + std::to_string(labels_.size()) + " does not match row count " +
                    std::to_string(series_.rows()));
  }
  std::size_t positives = 0;
  for (auto l : labels_) {
    if (l > 1) throw Error(ErrorKind::kParse, "label outside {0,1}");
    positives += l;
  }
  anomaly_rate_ = labels_.empty() ? 0.0
                                  : static_cast<double>(positives) /
                                        static_cast<double>(labels_.size());
}

LabeledSeries LabeledSeries::slice(std::size_t begin, std::size_t end) const {
  return LabeledSeries(series_.slice(begin, end),
                       std::vector<std::uint8_t>(labels_.begin() + static_cast<std::ptrdiff_t>(begin),
                                                 labels_.begin() + static_cast<std::ptrdiff_t>(end)));
}

std::size_t window_count(std::size_t length, const WindowingSpec& spec) {
  if (!spec.windowed) {
    if (length == 0) throw Error(ErrorKind::kInvalidWindow, "empty series");
    return length;
  }
  if (spec.window_length == 0) throw Error(ErrorKind::kInvalidWindow, "window length must be >= 1");
  if (spec.window_length > length) {
    throw Error(ErrorKind::kInvalidWindow, "window length " + std::to_string(spec.window_length) +
                                               " exceeds series length " + std::to_string(length));
  }
  return length - spec.window_length + 1;
}

namespace {

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kData, "cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  // A trailing blank line (file ending in a newline twice) is tolerated.
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

double parse_cell(std::string_view cell, std::size_t line_no, std::size_t col) {
  while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) cell.remove_prefix(1);
  while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t')) cell.remove_suffix(1);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
    throw Error(ErrorKind::kParse, "cannot parse cell at row " + std::to_string(line_no) +
                                       ", column " + std::to_string(col) + ": '" +
                                       std::string(cell) + "'");
  }
  if (!std::isfinite(value)) {
    throw Error(ErrorKind::kParse, "non-finite cell at row " + std::to_string(line_no) +
                                       ", column " + std::to_string(col));
  }
  return value;
}

TimeSeries parse_matrix(const std::vector<std::string>& lines, std::size_t first,
                        const std::filesystem::path& path) {
  if (lines.size() <= first) throw Error(ErrorKind::kStructural, "empty file " + path.string());
  std::size_t cols = 0;
  std::vector<double> values;
  for (std::size_t i = first; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    std::string_view line = lines[i];
    std::size_t count = 0;
    std::size_t start = 0;
    while (true) {
      std::size_t comma = line.find(',', start);
      std::string_view cell =
          line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
      values.push_back(parse_cell(cell, line_no, count + 1));
      ++count;
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (i == first) {
      cols = count;
    } else if (count != cols) {
      throw Error(ErrorKind::kStructural, "ragged row at line " + std::to_string(line_no) +
                                              ": expected " + std::to_string(cols) +
                                              " fields, found " + std::to_string(count));
    }
  }
  return TimeSeries(lines.size() - first, cols, std::move(values));
}

}  // namespace

TimeSeries load_csv(const std::filesystem::path& path, bool has_header) {
  return parse_matrix(read_lines(path), has_header ? 1 : 0, path);
}

LabeledSeries load_smd(const std::filesystem::path& data_path,
                       const std::filesystem::path& label_path) {
  TimeSeries data = load_csv(data_path, false);
  auto lines = read_lines(label_path);
  if (lines.size() != data.rows()) {
    throw Error(ErrorKind::kStructural, "label file has " + std::to_string(lines.size()) +
                                            " lines but data has " + std::to_string(data.rows()) +
                                            " rows");
  }
  std::vector<std::uint8_t> labels(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view s = lines[i];
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    if (s == "0" || s == "0.0") {
      labels[i] = 0;
    } else if (s == "1" || s == "1.0") {
      labels[i] = 1;
    } else {
      throw Error(ErrorKind::kParse, "label at line " + std::to_string(i + 1) +
                                         " is not 0 or 1: '" + std::string(s) + "'");
    }
  }
  return LabeledSeries(std::move(data), std::move(labels));
}

LabeledSeries load_labeled_csv(const std::filesystem::path& path, bool has_header) {
  TimeSeries raw = load_csv(path, has_header);
  if (raw.cols() < 2) {
    throw Error(ErrorKind::kStructural, path.string() + ": need at least one feature plus a label column");
  }
  const std::size_t d = raw.cols() - 1;
  std::vector<double> values;
  values.reserve(raw.rows() * d);
  std::vector<std::uint8_t> labels(raw.rows());
  for (std::size_t i = 0; i < raw.rows(); ++i) {
    auto r = raw.row(i);
    values.insert(values.end(), r.begin(), r.begin() + static_cast<std::ptrdiff_t>(d));
    double l = r[d];
    if (l != 0.0 && l != 1.0) {
      throw Error(ErrorKind::kParse, "label at line " + std::to_string(i + 1 + (has_header ? 1 : 0)) +
                                         " is not 0 or 1");
    }
    labels[i] = static_cast<std::uint8_t>(l);
  }
  return LabeledSeries(TimeSeries(raw.rows(), d, std::move(values)), std::move(labels));
}

std::string format_csv(const TimeSeries& series) {
  std::string out;
  out.reserve(series.values().size() * 12);
  char buf[64];
  for (std::size_t i = 0; i < series.rows(); ++i) {
    auto r = series.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (j) out.push_back(',');
      auto res = std::to_chars(buf, buf + sizeof(buf), r[j]);
      out.append(buf, res.ptr);
    }
    out.push_back('\n');
  }
  return out;
}

void write_csv(const TimeSeries& series, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kData, "cannot write " + path.string());
  out << format_csv(series);
  if (!out) throw Error(ErrorKind::kData, "write failed for " + path.string());
}

Split split_contiguous(const LabeledSeries& source, double train_frac, double val_frac_of_train) {
  if (!(train_frac > 0.0 && train_frac < 1.0)) {
    throw Error(ErrorKind::kInvalidSplit, "train fraction must lie in (0,1)");
  }
  if (!(val_frac_of_train >= 0.0 && val_frac_of_train < 1.0)) {
    throw Error(ErrorKind::kInvalidSplit, "validation fraction must lie in [0,1)");
  }
  const std::size_t total = source.size();
  const auto fit_rows = static_cast<std::size_t>(std::floor(train_frac * static_cast<double>(total)));
  const auto val_rows =
      static_cast<std::size_t>(std::floor(val_frac_of_train * static_cast<double>(fit_rows)));
  const std::size_t train_rows = fit_rows - val_rows;
  const std::size_t test_rows = total - fit_rows;

  if (train_rows == 0) throw Error(ErrorKind::kInvalidSplit, "training segment would be empty");
  if (test_rows == 0) throw Error(ErrorKind::kInvalidSplit, "test segment would be empty");
  if (val_rows == 0 && val_frac_of_train > 0.0) {
    throw Error(ErrorKind::kInvalidSplit, "validation segment collapsed to zero rows");
  }

  Split split;
  split.train_begin = 0;
  split.val_begin = train_rows;
  split.test_begin = fit_rows;
  split.end = total;
  split.train = source.series().slice(0, train_rows);
  split.val = source.series().slice(train_rows, fit_rows);
  split.test = source.slice(fit_rows, total);
  return split;
}

namespace {

constexpr double kNoiseSigma = 0.25;
constexpr std::size_t kMinInterval = 5;
constexpr std::size_t kMaxInterval = 50;

struct ChannelShape {
  double amplitude;
  double period;
  double phase;
};

std::vector<ChannelShape> draw_shapes(std::mt19937_64& rng, std::size_t channels) {
  std::uniform_real_distribution<double> amp(0.5, 1.5);
  std::uniform_real_distribution<double> period(40.0, 400.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::vector<ChannelShape> shapes(channels);
  for (auto& s : shapes) {
    s.amplitude = amp(rng);
    s.period = period(rng);
    s.phase = phase(rng);
  }
  return shapes;
}

std::vector<double> clean_signal(const std::vector<ChannelShape>& shapes, std::size_t length) {
  const std::size_t d = shapes.size();
  std::vector<double> v(length * d);
  for (std::size_t t = 0; t < length; ++t) {
    for (std::size_t j = 0; j < d; ++j) {
      const auto& s = shapes[j];
      v[t * d + j] =
          s.amplitude * std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / s.period + s.phase);
    }
  }
  return v;
}

void check_synthetic(const SyntheticOptions& o) {
  if (o.length < 100) throw Error(ErrorKind::kConfig, "synthetic series needs T >= 100");
  if (o.channels == 0) throw Error(ErrorKind::kConfig, "synthetic series needs d >= 1");
  if (!(o.target_rate > 0.0)) throw Error(ErrorKind::kConfig, "target anomaly rate must be > 0");
  if (o.target_rate >= 0.5) {
    throw Error(ErrorKind::kConfig, "target anomaly rate >= 0.5 gives a degenerate benchmark");
  }
}

}  // namespace

SyntheticTruth synthetic_truth(const SyntheticOptions& options) {
  check_synthetic(options);
  std::mt19937_64 rng(options.seed);
  auto shapes = draw_shapes(rng, options.channels);
  return {TimeSeries(options.length, options.channels, clean_signal(shapes, options.length)),
          kNoiseSigma};
}

LabeledSeries generate_synthetic(const SyntheticOptions& options) {
  check_synthetic(options);
  const std::size_t T = options.length;
  const std::size_t d = options.channels;
  std::mt19937_64 rng(options.seed);
  auto shapes = draw_shapes(rng, d);
  std::vector<double> values = clean_signal(shapes, T);

  std::normal_distribution<double> noise(0.0, kNoiseSigma);
  for (auto& v : values) v += noise(rng);

  // Interval lengths: draw until the target is reached, then trim the excess
  // back out (never below the minimum length) so the total hits the target.
  const auto target = static_cast<std::size_t>(
      std::max(1.0, std::round(options.target_rate * static_cast<double>(T))));
  std::uniform_int_distribution<std::size_t> len_dist(kMinInterval, kMaxInterval);
  std::vector<std::size_t> lengths;
  std::size_t total = 0;
  while (total < target) {
    lengths.push_back(len_dist(rng));
    total += lengths.back();
  }
  std::size_t excess = total - target;
  for (auto it = lengths.rbegin(); it != lengths.rend() && excess > 0; ++it) {
    const std::size_t room = *it > kMinInterval ? *it - kMinInterval : 0;
    const std::size_t cut = std::min(room, excess);
    *it -= cut;
    excess -= cut;
  }
  // Only reachable when the target is below the minimum interval length.
  if (excess > 0) lengths.back() -= excess;

  // One interval per equal-width stratum keeps intervals disjoint and spread
  // across the whole series.
  const std::size_t k = lengths.size();
  const std::size_t stratum = T / k;
  std::vector<std::uint8_t> labels(T, 0);
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_int_distribution<std::size_t> channel(0, d - 1);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t len = lengths[i];
    const std::size_t lo = i * stratum;
    // Leave one clean sample at the stratum end so neighbours never touch.
    const std::size_t slack = stratum > len + 1 ? stratum - len - 1 : 0;
    const std::size_t start = lo + std::uniform_int_distribution<std::size_t>(0, slack)(rng);
    const bool spike = coin(rng) == 0;
    const double sign = coin(rng) == 0 ? 1.0 : -1.0;
    const std::size_t target_channel = channel(rng);
    for (std::size_t t = start; t < std::min(T, start + len); ++t) {
      labels[t] = 1;
      if (spike) {
        values[t * d + target_channel] += sign * 8.0 * kNoiseSigma;
      } else {
        for (std::size_t j = 0; j < d; ++j) values[t * d + j] += sign * 4.0 * kNoiseSigma;
      }
    }
  }
  return LabeledSeries(TimeSeries(T, d, std::move(values)), std::move(labels));
}

}  // namespace tierbench
