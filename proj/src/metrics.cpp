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

#include "tierbench/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "tierbench/error.hpp"

namespace tierbench {

AlignedScores align_window_scores(std::span<const double> window_scores, std::size_t window_length,
                                  std::size_t length) {
  if (window_length == 0 || window_length > length ||
      window_scores.size() != length - window_length + 1) {
    throw Error(ErrorKind::kStructural,
                "expected " +
                    std::to_string(window_length == 0 || window_length > length
                                       ? 0
                                       : length - window_length + 1) +
                    " window scores for T=" + std::to_string(length) + ", w=" +
                    std::to_string(window_length) + "; got " + std::to_string(window_scores.size()));
  }
  AlignedScores out;
  out.scores.assign(length, 0.0);
  out.scored_mask.assign(length, 0);
  for (std::size_t i = 0; i < window_scores.size(); ++i) {
    out.scores[i + window_length - 1] = window_scores[i];
    out.scored_mask[i + window_length - 1] = 1;
  }
  return out;
}

double auc_pr(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  if (scores.size() != labels.size()) {
    throw Error(ErrorKind::kStructural, "score and label lengths differ");
  }
  const std::size_t positives =
      static_cast<std::size_t>(std::count_if(labels.begin(), labels.end(), [](auto l) { return l != 0; }));
  if (positives == 0) throw Error(ErrorKind::kUndefinedMetric, "no anomalies in span");
  if (positives == labels.size()) return 1.0;

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b] || (scores[a] == scores[b] && a < b);
  });

  double ap = 0.0;
  double prev_recall = 0.0;
  std::size_t tp = 0;
  std::size_t seen = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double threshold = scores[order[i]];
    while (i < order.size() && scores[order[i]] == threshold) {
      tp += labels[order[i]] != 0;
      ++seen;
      ++i;
    }
    const double recall = static_cast<double>(tp) / static_cast<double>(positives);
    const double precision = static_cast<double>(tp) / static_cast<double>(seen);
    ap += (recall - prev_recall) * precision;
    prev_recall = recall;
  }
  return ap;
}

double random_baseline(std::span<const std::uint8_t> labels) {
  if (labels.empty()) throw Error(ErrorKind::kStructural, "empty label span");
  const auto positives = std::count_if(labels.begin(), labels.end(), [](auto l) { return l != 0; });
  return static_cast<double>(positives) / static_cast<double>(labels.size());
}

MetricsResult evaluate(const AlignedScores& aligned, std::span<const std::uint8_t> labels) {
  if (aligned.scores.size() != labels.size() || aligned.scored_mask.size() != labels.size()) {
    throw Error(ErrorKind::kStructural, "aligned scores do not match label length");
  }
  std::vector<double> s;
  std::vector<std::uint8_t> l;
  for (std::size_t t = 0; t < labels.size(); ++t) {
    if (!aligned.scored_mask[t]) continue;
    s.push_back(aligned.scores[t]);
    l.push_back(labels[t]);
  }
  MetricsResult out;
  out.n_scored = s.size();
  out.random_baseline = random_baseline(l);
  out.auc_pr = auc_pr(s, l);
  return out;
}

double lift(double auc_pr, double baseline) {
  if (!(baseline > 0.0)) throw Error(ErrorKind::kUndefinedMetric, "lift needs a positive anomaly rate");
  return auc_pr / baseline;
}

}  // namespace tierbench
