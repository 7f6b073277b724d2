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


// Per-element reference implementations. They share no code with the library
// beyond WindowSet::contains and the valid-region bookkeeping.

#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "sumlab/windowset.hpp"

namespace oracle {

using sumlab::Window;
using sumlab::WindowSet;

inline std::vector<std::int64_t> members(const WindowSet& s) {
  std::vector<std::int64_t> out;
  for (std::int64_t x = s.valid().lo; x < s.valid().hi; ++x)
    if (s.contains(x)) out.push_back(x);
  return out;
}

inline std::vector<std::int64_t> random_elements(std::mt19937_64& rng, Window w, double p) {
  std::bernoulli_distribution coin(p);
  std::vector<std::int64_t> out;
  for (std::int64_t x = w.lo; x < w.hi; ++x)
    if (coin(rng)) out.push_back(x);
  return out;
}

// x is in A+B on the valid region iff x - a lies in B for some a; the region
// is the set of x for which every x - a lies inside B's valid region.
inline std::vector<std::int64_t> sumset(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b,
                                        Window b_valid, Window* valid_out) {
  const std::int64_t amin = *std::min_element(a.begin(), a.end());
  const std::int64_t amax = *std::max_element(a.begin(), a.end());
  const Window valid{b_valid.lo + amax, b_valid.hi + amin};
  *valid_out = valid;
  std::set<std::int64_t> bs(b.begin(), b.end());
  std::vector<std::int64_t> out;
  for (std::int64_t x = valid.lo; x < valid.hi; ++x) {
    for (auto ai : a) {
      if (bs.count(x - ai)) {
        out.push_back(x);
        break;
      }
    }
  }
  return out;
}

// x is in ∩ (E - t) iff x + t ∈ E for every t.
inline std::vector<std::int64_t> intersect_translates(const std::vector<std::int64_t>& e, Window e_valid,
                                                      const std::vector<std::int64_t>& offsets, Window* valid_out) {
  const std::int64_t tmin = *std::min_element(offsets.begin(), offsets.end());
  const std::int64_t tmax = *std::max_element(offsets.begin(), offsets.end());
  const Window valid{e_valid.lo - tmin, e_valid.hi - tmax};
  *valid_out = valid;
  std::set<std::int64_t> es(e.begin(), e.end());
  std::vector<std::int64_t> out;
  for (std::int64_t x = valid.lo; x < valid.hi; ++x) {
    bool all = true;
    for (auto t : offsets) all = all && es.count(x + t);
    if (all) out.push_back(x);
  }
  return out;
}

// Largest |S ∩ [s, s+len)| over windows inside the valid region, recounted from scratch.
inline std::int64_t max_window_count(const WindowSet& s, std::int64_t len) {
  std::int64_t best = -1;
  for (std::int64_t start = s.valid().lo; start + len <= s.valid().hi; ++start) {
    std::int64_t c = 0;
    for (std::int64_t x = start; x < start + len; ++x) c += s.contains(x);
    best = std::max(best, c);
  }
  return best;
}

// Same maximum via prefix sums over the pattern indicator; used for large windows.
inline std::int64_t pattern_max_count(const WindowSet& e, const std::vector<std::int64_t>& offsets,
                                      std::int64_t len) {
  const std::int64_t tmin = std::min<std::int64_t>(0, *std::min_element(offsets.begin(), offsets.end()));
  const std::int64_t tmax = std::max<std::int64_t>(0, *std::max_element(offsets.begin(), offsets.end()));
  const std::int64_t lo = e.valid().lo - tmin, hi = e.valid().hi - tmax;
  if (hi - lo < len) return -1;
  std::vector<std::int64_t> prefix{0};
  for (std::int64_t x = lo; x < hi; ++x) {
    bool all = e.contains(x);
    for (auto t : offsets) all = all && e.contains(x + t);
    prefix.push_back(prefix.back() + (all ? 1 : 0));
  }
  std::int64_t best = 0;
  for (std::size_t s = 0; s + static_cast<std::size_t>(len) < prefix.size(); ++s)
    best = std::max(best, prefix[s + static_cast<std::size_t>(len)] - prefix[s]);
  return best;
}

}  // namespace oracle
