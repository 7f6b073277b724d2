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

#include "sumlab/density.hpp"

#include <array>
#include <bit>
#include <string>

namespace sumlab {

namespace {

// One entry per (entering byte, leaving byte): net change over 8 steps, the
// best prefix sum over steps 1..8 and the first step reaching it.
struct StepBlock {
  std::int8_t delta;
  std::int8_t best;
  std::uint8_t best_step;
};

const std::array<StepBlock, 65536>& step_table() {
  static const auto table = [] {
    std::array<StepBlock, 65536> t{};
    for (int in = 0; in < 256; ++in) {
      for (int out = 0; out < 256; ++out) {
        int run = 0, best = -100, step = 0;
        for (int b = 0; b < 8; ++b) {
          run += ((in >> b) & 1) - ((out >> b) & 1);
          if (run > best) {
            best = run;
            step = b + 1;
          }
        }
        t[(in << 8) | out] = {static_cast<std::int8_t>(run), static_cast<std::int8_t>(best),
                              static_cast<std::uint8_t>(step)};
      }
    }
    return t;
  }();
  return table;
}

}  // namespace

WindowCount max_window_count(const WindowSet& s, std::int64_t len) {
  const Window v = s.valid();
  if (len <= 0 || len > v.length()) {
    throw Error(Errc::window_too_small, "window length " + std::to_string(len) +
                                            " does not fit in valid length " + std::to_string(v.length()));
  }
  const std::int64_t steps = v.length() - len;  // number of slides after the first window
  WindowCount best{s.count_in({v.lo, v.lo + len}), v.lo};
  if (steps == 0) return best;

  // Step i moves the window from start v.lo+i to v.lo+i+1: bit v.lo+len+i enters, v.lo+i leaves.
  const auto entering = s.extract(v.lo + len, steps);
  const auto leaving = s.extract(v.lo, steps);
  const auto& table = step_table();

  std::int64_t running = static_cast<std::int64_t>(best.count);
  std::int64_t top = running;
  for (std::size_t w = 0; w < entering.size(); ++w) {
    std::uint64_t in = entering[w];
    std::uint64_t out = leaving[w];
    if (in == out) continue;  // every step in this word is neutral
    for (int byte = 0; byte < 8; ++byte) {
      const auto& blk = table[((in & 0xFF) << 8) | (out & 0xFF)];
      if (running + blk.best > top) {
        top = running + blk.best;
        best.start = v.lo + static_cast<std::int64_t>(w) * 64 + byte * 8 + blk.best_step;
      }
      running += blk.delta;
      in >>= 8;
      out >>= 8;
    }
  }
  best.count = static_cast<std::uint64_t>(top);
  return best;
}

DensityEstimate banach_density(const WindowSet& s, std::int64_t M) {
  if (M < 0) throw Error(Errc::invalid_argument, "M must be nonnegative");
  const auto wc = max_window_count(s, M + 1);
  return {{static_cast<std::int64_t>(wc.count), M + 1}, M, {wc.start, wc.start + M + 1}};
}

std::vector<DensityEstimate> banach_density_sweep(const WindowSet& s, std::span<const std::int64_t> Ms) {
  std::vector<DensityEstimate> out;
  out.reserve(Ms.size());
  for (auto M : Ms) out.push_back(banach_density(s, M));
  return out;
}

Rational relative_density(const WindowSet& a, std::span<const std::int64_t> sj) {
  if (sj.empty()) throw Error(Errc::invalid_argument, "S_j must be nonempty");
  std::int64_t hits = 0;
  for (auto n : sj) {
    if (!a.valid().contains(n)) {
      throw Error(Errc::index_out_of_range, "element " + std::to_string(n) + " of S_j lies outside A.valid");
    }
    hits += a.contains(n) ? 1 : 0;
  }
  return {hits, static_cast<std::int64_t>(sj.size())};
}

Rational relative_density(const WindowSet& a, const SequenceFamily& family, std::int64_t j) {
  return relative_density(a, family.generate(j));
}

RelativeDensityProfile relative_density_profile(const WindowSet& a, const SequenceFamily& family,
                                                std::span<const std::int64_t> js) {
  RelativeDensityProfile p;
  p.js.assign(js.begin(), js.end());
  for (auto j : js) p.values.push_back(relative_density(a, family, j));
  p.tail_max.resize(p.values.size());
  for (std::size_t i = p.values.size(); i-- > 0;) {
    p.tail_max[i] = (i + 1 < p.values.size() && p.tail_max[i + 1] > p.values[i]) ? p.tail_max[i + 1] : p.values[i];
  }
  return p;
}

nlohmann::json to_json(const DensityEstimate& e) {
  return {{"M", e.window_len}, {"value_num", e.value.num}, {"value_den", e.value.den}, {"argmax_lo", e.argmax_window.lo}};
}

}  // namespace sumlab
