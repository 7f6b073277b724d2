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
#include <span>
#include <vector>

#include <json.hpp>

#include "sumlab/common.hpp"
#include "sumlab/sequences.hpp"
#include "sumlab/windowset.hpp"

namespace sumlab {

/// Windowed upper Banach density: value = |S ∩ argmax_window| / (M+1).
struct DensityEstimate {
  Rational value;
  std::int64_t window_len = 0;  // M
  Window argmax_window;
};

struct WindowCount {
  std::uint64_t count = 0;
  std::int64_t start = 0;  // first start attaining the maximum
};

/// Maximum of |S ∩ [s, s+len)| over all starts with [s, s+len) ⊆ S.valid.
/// Sliding popcount driven by a byte-pair lookup table, eight steps per lookup.
WindowCount max_window_count(const WindowSet& s, std::int64_t len);

/// Throws WindowTooSmall when M+1 exceeds the valid length.
DensityEstimate banach_density(const WindowSet& s, std::int64_t M);
std::vector<DensityEstimate> banach_density_sweep(const WindowSet& s, std::span<const std::int64_t> Ms);

/// |A ∩ S_j| / |S_j|; throws IndexOutOfRange unless S_j ⊆ A.valid.
Rational relative_density(const WindowSet& a, std::span<const std::int64_t> sj);
Rational relative_density(const WindowSet& a, const SequenceFamily& family, std::int64_t j);

/// Per-j relative densities and the running max over the tail j' ≥ j (limsup proxy).
struct RelativeDensityProfile {
  std::vector<std::int64_t> js;
  std::vector<Rational> values;
  std::vector<Rational> tail_max;
};
RelativeDensityProfile relative_density_profile(const WindowSet& a, const SequenceFamily& family,
                                                std::span<const std::int64_t> js);

nlohmann::json to_json(const DensityEstimate& e);

}  // namespace sumlab
