# Copyright 2026 The tierbench Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Compute-reduction ladder benchmarking for time-series anomaly detectors."""

from ._tierbench import (
    Error,
    align_window_scores,
    auc_pr,
    builtin_methods,
    canonical_ladder,
    default_config,
    default_tau_grid,
    fit_score,
    generate_synthetic,
    lift,
    pareto_front,
    quantile,
    random_baseline,
    run_cli,
    scale_param,
    split_sizes,
)

__all__ = [
    "Error",
    "align_window_scores",
    "auc_pr",
    "builtin_methods",
    "canonical_ladder",
    "default_config",
    "default_tau_grid",
    "fit_score",
    "generate_synthetic",
    "lift",
    "pareto_front",
    "quantile",
    "random_baseline",
    "run_cli",
    "scale_param",
    "split_sizes",
]

__version__ = "0.1.0"
