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

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "tierbench/cli.hpp"
#include "tierbench/compute_pool.hpp"
#include "tierbench/data.hpp"
#include "tierbench/detectors.hpp"
#include "tierbench/error.hpp"
#include "tierbench/feasibility.hpp"
#include "tierbench/ladder.hpp"
#include "tierbench/metrics.hpp"

namespace py = pybind11;
using namespace tierbench;

namespace {

using Matrix = py::array_t<double, py::array::c_style | py::array::forcecast>;
using Vector = py::array_t<double, py::array::c_style | py::array::forcecast>;
using Labels = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

TimeSeries to_series(const Matrix& m) {
  if (m.ndim() != 2) throw Error(ErrorKind::kStructural, "expected a 2-D array");
  const auto rows = static_cast<std::size_t>(m.shape(0));
  const auto cols = static_cast<std::size_t>(m.shape(1));
  return TimeSeries(rows, cols, std::vector<double>(m.data(), m.data() + rows * cols));
}

std::vector<double> to_vector(const Vector& v) {
  if (v.ndim() != 1) throw Error(ErrorKind::kStructural, "expected a 1-D array");
  return {v.data(), v.data() + v.size()};
}

std::vector<std::uint8_t> to_labels(const Labels& v) {
  if (v.ndim() != 1) throw Error(ErrorKind::kStructural, "expected a 1-D label array");
  return {v.data(), v.data() + v.size()};
}

py::array_t<double> to_numpy(const TimeSeries& s) {
  py::array_t<double> out({s.rows(), s.cols()});
  std::copy(s.values().begin(), s.values().end(), out.mutable_data());
  return out;
}

py::dict tier_dict(const TierSpec& t) {
  py::dict d;
  d["id"] = t.id;
  d["thread_cap"] = t.thread_cap ? py::cast(*t.thread_cap) : py::none();
  d["scale"] = t.scale;
  return d;
}

}  // namespace

PYBIND11_MODULE(_tierbench, m) {
  m.doc() = "Compute-reduction ladder benchmarking for time-series anomaly detectors";

  static py::exception<Error> error_type(m, "Error");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::handle(error_type.ptr())(std::string(e.what()));
      exc.attr("kind") = std::string(to_string(e.kind()));
      PyErr_SetObject(error_type.ptr(), exc.ptr());
    }
  });

  m.def("canonical_ladder", [] {
    py::list out;
    for (const auto& t : canonical_ladder()) out.append(tier_dict(t));
    return out;
  });

  m.def(
      "scale_param",
      [](std::int64_t value, const std::string& role, double scale) {
        return scale_param(value, parse_role(role), scale);
      },
      py::arg("value"), py::arg("role"), py::arg("scale"));

  m.def("builtin_methods", &builtin_methods);

  m.def(
      "default_config",
      [](const std::string& method, std::size_t n_features) {
        const auto config = make_detector(method)->default_config(n_features);
        py::dict out;
        for (const auto& p : config.params()) {
          out[py::str(p.name)] = py::make_tuple(p.value, std::string(to_string(p.role)));
        }
        return out;
      },
      py::arg("method"), py::arg("n_features"));

  m.def(
      "fit_score",
      [](const std::string& method, const Matrix& train, const Matrix& test, const py::dict& params,
         std::uint64_t seed, std::size_t threads) {
        const auto tr = to_series(train);
        const auto te = to_series(test);
        auto det = make_detector(method);
        auto config = det->default_config(tr.cols());
        for (const auto& [k, v] : params) config.set(py::cast<std::string>(k), py::cast<std::int64_t>(v));
        std::vector<double> scores;
        {
          py::gil_scoped_release release;
          ComputePool pool(threads);
          scores = det->fit(tr, config, seed, pool)->score(te, pool);
        }
        return py::array_t<double>(static_cast<py::ssize_t>(scores.size()), scores.data());
      },
      py::arg("method"), py::arg("train"), py::arg("test"), py::arg("params") = py::dict(), py::arg("seed") = 0,
      py::arg("threads") = 1);

  m.def(
      "auc_pr", [](const Vector& s, const Labels& l) { return auc_pr(to_vector(s), to_labels(l)); },
      py::arg("scores"), py::arg("labels"));
  m.def(
      "random_baseline", [](const Labels& l) { return random_baseline(to_labels(l)); }, py::arg("labels"));
  m.def("lift", &lift, py::arg("auc_pr"), py::arg("baseline"));
  m.def(
      "align_window_scores",
      [](const Vector& s, std::size_t w, std::size_t length) {
        const auto a = align_window_scores(to_vector(s), w, length);
        py::list out;
        for (std::size_t i = 0; i < a.scores.size(); ++i) {
          out.append(a.scored_mask[i] ? py::cast(a.scores[i]) : py::none());
        }
        return out;
      },
      py::arg("window_scores"), py::arg("window_length"), py::arg("length"));

  m.def(
      "generate_synthetic",
      [](std::size_t length, std::size_t channels, double rate, std::uint64_t seed) {
        const auto ls = generate_synthetic({length, channels, rate, seed});
        py::array_t<std::uint8_t> labels(static_cast<py::ssize_t>(ls.size()));
        std::copy(ls.labels().begin(), ls.labels().end(), labels.mutable_data());
        return py::make_tuple(to_numpy(ls.series()), labels);
      },
      py::arg("length") = 4000, py::arg("channels") = 4, py::arg("rate") = 0.02, py::arg("seed") = 0);

  m.def(
      "split_sizes",
      [](std::size_t length, double train_frac, double val_frac) {
        const auto s = split_contiguous(LabeledSeries(TimeSeries(length, 1, std::vector<double>(length, 0.0)),
                                                      std::vector<std::uint8_t>(length, 0)),
                                        train_frac, val_frac);
        return py::make_tuple(s.train.rows(), s.val.rows(), s.test.size());
      },
      py::arg("length"), py::arg("train_frac"), py::arg("val_frac"));

  m.def(
      "pareto_front",
      [](const std::vector<std::pair<double, double>>& points) {
        std::vector<ParetoPoint> pts;
        for (std::size_t i = 0; i < points.size(); ++i) pts.push_back({points[i].first, points[i].second, i, ""});
        std::vector<std::size_t> keep;
        for (const auto& p : pareto_front(std::move(pts))) keep.push_back(p.index);
        return keep;
      },
      py::arg("points"), "Indices of the (wps, auc_pr) points on the front, in front order.");

  m.def(
      "quantile", [](std::vector<double> v, double p) { return quantile(std::move(v), p); }, py::arg("values"),
      py::arg("p"));
  m.def("default_tau_grid", &default_tau_grid);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code = 0;
        {
          py::gil_scoped_release release;
          code = cli::run_cli(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run the command-line tool in-process; returns (exit_code, stdout, stderr).");
}
