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

#include <array>
#include <cstdint>

#include "tierbench/ladder.hpp"

namespace tierbench::testing {

// Expected scale_param outputs, computed by hand with half-away-from-zero
// rounding and exact square roots (cross-checked with Python decimal at 50
// digits). Rows: s = 1.0, 0.75, 0.5, 0.25. Columns: v below.
inline constexpr std::array<double, 4> kTableScales = {1.0, 0.75, 0.5, 0.25};
inline constexpr std::array<std::int64_t, 7> kTableValues = {1, 2, 8, 10, 40, 64, 100};

struct RoleTable {
  ScalingRole role;
  std::array<std::array<std::int64_t, 7>, 4> expected;
};

inline const std::array<RoleTable, 6> kScalingTable = {{
    {ScalingRole::kWork,
     {{{1, 2, 8, 10, 40, 64, 100}, {1, 2, 6, 8, 30, 48, 75}, {1, 1, 4, 5, 20, 32, 50}, {1, 1, 2, 3, 10, 16, 25}}}},
    {ScalingRole::kWidth,
     {{{1, 2, 8, 10, 40, 64, 100}, {1, 2, 7, 9, 35, 55, 87}, {1, 1, 6, 7, 28, 45, 71}, {1, 1, 4, 5, 20, 32, 50}}}},
    {ScalingRole::kHeads,
     {{{1, 2, 8, 10, 40, 64, 100}, {1, 2, 7, 9, 35, 55, 87}, {1, 1, 6, 7, 28, 45, 71}, {1, 1, 4, 5, 20, 32, 50}}}},
    {ScalingRole::kDepth,
     {{{1, 2, 8, 10, 40, 64, 100}, {1, 2, 7, 9, 37, 60, 93}, {1, 2, 7, 8, 34, 54, 84}, {1, 1, 6, 7, 28, 45, 71}}}},
    {ScalingRole::kWindow,
     {{{8, 8, 8, 10, 40, 64, 100}, {8, 8, 8, 9, 35, 55, 87}, {8, 8, 8, 8, 28, 45, 71}, {8, 8, 8, 8, 20, 32, 50}}}},
    {ScalingRole::kUnscaled,
     {{{1, 2, 8, 10, 40, 64, 100}, {1, 2, 8, 10, 40, 64, 100}, {1, 2, 8, 10, 40, 64, 100},
       {1, 2, 8, 10, 40, 64, 100}}}},
}};

}  // namespace tierbench::testing
