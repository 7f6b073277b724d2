// Copyright 2026 The sumlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <cstdint>
#include <vector>

#include "sumlab/fixed_point.hpp"
#include "sumlab/windowset.hpp"

namespace sumlab {

/// I.i.d. Bernoulli(p) membership from mt19937_64(seed): position window.lo + i
/// uses the i-th draw and is a member iff draw < p * 2^64.
WindowSet bernoulli_set(Window window, double p, std::uint64_t seed);

/// {n : n mod period ∈ residues}.
WindowSet periodic_set(Window window, std::int64_t period, const std::vector<std::int64_t>& residues);

/// {n : {n^k α} ∈ [lo, hi)} for 0 ≤ lo < hi ≤ 1, evaluated exactly in fixed point.
WindowSet power_rotation_set(Window window, int k, const FixedPointReal& alpha, double lo, double hi);

/// {base^0, base^1, ..., base^max_exp}; throws Overflow past 64 bits.
FiniteOffsets powers_of(std::int64_t base, int max_exp);

}  // namespace sumlab
