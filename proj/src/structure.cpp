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
#include "sumlab/structure.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "sumlab/parallel.hpp"

namespace sumlab {

GapProfile gap_profile(const WindowSet& s) {
  const Window v = s.valid();
  if (v.empty()) throw Error(Errc::empty_valid_region, "gap_profile needs a nonempty valid region");
  GapProfile g;
  g.window = v;
  const auto bits = s.extract(v.lo, v.length());
  std::int64_t run_in = 0, run_out = 0, last = 0;
  bool seen = false;
  for (std::int64_t i = 0; i < v.length(); ++i) {
    if ((bits[i >> 6] >> (i & 63)) & 1) {
      ++run_in;
      run_out = 0;
      if (seen) g.max_gap = std::max(g.max_gap, i - last);
      seen = true;
      last = i;
    } else {
      ++run_out;
      run_in = 0;
    }
    g.longest_run_present = std::max(g.longest_run_present, run_in);
    g.longest_run_absent = std::max(g.longest_run_absent, run_out);
  }
  if (s.count_in(v) < 2) g.max_gap = v.length();
  return g;
}

nlohmann::json to_json(const GapProfile& g) {
  return {{"max_gap", g.max_gap},
          {"longest_run_absent", g.longest_run_absent},
          {"longest_run_present", g.longest_run_present},
          {"valid_lo", g.window.lo},
          {"valid_hi", g.window.hi}};
}

SyndeticEvidence is_piecewise_syndetic_evidence(const WindowSet& s, std::int64_t g, std::int64_t L) {
  const Window v = s.valid();
  if (g < 1 || L < 1) throw Error(Errc::invalid_argument, "g and L must be positive");
  if (L > v.length()) throw Error(Errc::window_too_small, "L exceeds the valid length");
  if (g > L) return {true, Window{v.lo, v.lo + L}};
  // A start b is bad when [b, b+g) misses S. I = [s, s+L) qualifies iff no bad
  // start lies in [s, s+L-g], so look for L-g+1 consecutive good starts.
  const auto bits = s.extract(v.lo, v.length());
  const std::int64_t need = L - g + 1;
  std::int64_t prev_bad = -1;  // relative to v.lo
  std::int64_t run_out = 0;
  auto check = [&](std::int64_t bad) -> std::optional<Window> {
    if (bad - prev_bad - 1 >= need) return Window{v.lo + prev_bad + 1, v.lo + prev_bad + 1 + L};
    prev_bad = bad;
    return std::nullopt;
  };
  for (std::int64_t i = 0; i < v.length(); ++i) {
    if ((bits[i >> 6] >> (i & 63)) & 1) {
      run_out = 0;
      continue;
    }
    if (++run_out >= g) {
      if (auto w = check(i - g + 1)) return {true, w};
    }
  }
  if (auto w = check(v.length() - g + 1)) return {true, w};
  return {};
}

void BohrSpec::validate() const {
  if (alphas.empty()) throw Error(Errc::invalid_argument, "Bohr spec needs at least one coordinate");
  if (alphas.size() != box.size()) throw Error(Errc::invalid_argument, "Bohr spec needs one interval per alpha");
}

void NilBohrSpec::validate() const {
  base.validate();
  if (polys.empty()) throw Error(Errc::invalid_argument, "Nil-Bohr spec needs at least one polynomial");
  for (const auto& p : polys) {
    if (p.constant_term() != 0) throw Error(Errc::invalid_argument, "polynomial " + p.to_string() + " has p(0) != 0");
  }
}

WindowSet bohr_members(const BohrSpec& spec, Window n_range) {
  spec.validate();
  if (n_range.empty()) throw Error(Errc::invalid_argument, "empty n_range");
  const std::int64_t len = n_range.length();
  std::vector<std::uint64_t> words(static_cast<std::size_t>((len + 63) / 64), ~std::uint64_t{0});
  for (std::size_t i = 0; i < spec.dim(); ++i) {
    const auto& alpha = spec.alphas[i];
    check_precision_budget(BigInt(static_cast<long>(std::max(std::abs(n_range.lo), std::abs(n_range.hi - 1)))),
                           alpha.frac_bits());
    FixedPointReal x = alpha.times(n_range.lo);  // stepping by α is exact mod 1
    for (std::int64_t r = 0; r < len; ++r, x = x + alpha) {
      if (!spec.box[i].contains(x)) words[r >> 6] &= ~(std::uint64_t{1} << (r & 63));
    }
  }
  return WindowSet::from_words(n_range, n_range, std::move(words));
}

WindowSet nil_bohr_members(const NilBohrSpec& spec, Window n_range) {
  spec.validate();
  if (n_range.empty()) throw Error(Errc::invalid_argument, "empty n_range");
  const std::int64_t len = n_range.length();
  std::vector<std::uint64_t> words(static_cast<std::size_t>((len + 63) / 64), 0);
  auto member = [&](std::int64_t n) {
    for (const auto& p : spec.polys) {
      BigInt m;
      try {
        m = BigInt(static_cast<long>(p(n)));
      } catch (const Error&) {
        m = p.eval_big(BigInt(static_cast<long>(n)));
      }
      for (std::size_t i = 0; i < spec.base.dim(); ++i) {
        if (!spec.base.box[i].contains(spec.base.alphas[i].times(m))) return false;
      }
    }
    return true;
  };
  parallel_for(words.size(), [&](std::size_t w) {
    std::uint64_t bits = 0;
    const std::int64_t base = static_cast<std::int64_t>(w) * 64;
    for (std::int64_t b = 0; b < 64 && base + b < len; ++b) {
      if (member(n_range.lo + base + b)) bits |= std::uint64_t{1} << b;
    }
    words[w] = bits;
  });
  return WindowSet::from_words(n_range, n_range, std::move(words));
}

TorusGridSet::TorusGridSet(int d, std::int64_t G) : d_(d), G_(G) {
  if (d < 1 || G < 1) throw Error(Errc::invalid_argument, "torus grid needs d >= 1 and G >= 1");
  std::int64_t cells = 1;
  for (int i = 0; i < d; ++i) {
    if (__builtin_mul_overflow(cells, G, &cells) || cells > (std::int64_t{1} << 32)) {
      throw Error(Errc::invalid_argument, "torus grid too large");
    }
  }
  bits_.assign(static_cast<std::size_t>(rows() * words_per_row()), 0);
}

std::int64_t TorusGridSet::cells() const {
  std::int64_t c = 1;
  for (int i = 0; i < d_; ++i) c *= G_;
  return c;
}

TorusGridSet TorusGridSet::full(int d, std::int64_t G) {
  TorusGridSet t(d, G);
  for (std::int64_t r = 0; r < t.rows(); ++r) {
    for (std::int64_t c = 0; c < G; ++c) t.row(r)[c >> 6] |= std::uint64_t{1} << (c & 63);
  }
  t.min_feature_ = 1.0;
  return t;
}

TorusGridSet TorusGridSet::box(std::int64_t G, const std::vector<std::pair<double, double>>& intervals) {
  TorusGridSet t(static_cast<int>(intervals.size()), G);
  std::vector<std::vector<bool>> axis(intervals.size(), std::vector<bool>(static_cast<std::size_t>(G)));
  t.min_feature_ = 1.0;
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    const auto [lo, hi] = intervals[i];
    if (!(lo >= 0 && lo <= 1 && hi >= 0 && hi <= 1) || lo == hi) {
      throw Error(Errc::invalid_argument, "box sides must be nonempty intervals in [0,1]");
    }
    const bool wraps = lo > hi;
    t.min_feature_ = std::min(t.min_feature_, wraps ? 1.0 - lo + hi : hi - lo);
    for (std::int64_t c = 0; c < G; ++c) {
      const double x = static_cast<double>(2 * c + 1) / static_cast<double>(2 * G);
      axis[i][static_cast<std::size_t>(c)] = wraps ? (x >= lo || x < hi) : (x >= lo && x < hi);
    }
  }
  const int d = t.d_;
  std::vector<std::int64_t> idx(static_cast<std::size_t>(d - 1), 0);
  for (std::int64_t r = 0; r < t.rows(); ++r) {
    bool in = true;
    for (int a = 0; a + 1 < d; ++a) in = in && axis[a][static_cast<std::size_t>(idx[a])];
    if (in) {
      for (std::int64_t c = 0; c < G; ++c) {
        if (axis[d - 1][static_cast<std::size_t>(c)]) t.row(r)[c >> 6] |= std::uint64_t{1} << (c & 63);
      }
    }
    for (int a = d - 2; a >= 0 && ++idx[a] == G; --a) idx[a] = 0;  // row-major increment
  }
  return t;
}

std::uint64_t TorusGridSet::count() const {
  std::uint64_t c = 0;
  for (auto w : bits_) c += static_cast<std::uint64_t>(std::popcount(w));
  return c;
}

bool TorusGridSet::contains(const std::vector<std::int64_t>& cell) const {
  if (static_cast<int>(cell.size()) != d_) throw Error(Errc::invalid_argument, "cell dimension mismatch");
  std::int64_t r = 0;
  for (int a = 0; a + 1 < d_; ++a) r = r * G_ + cell[a];
  const auto c = cell[d_ - 1];
  return (row(r)[c >> 6] >> (c & 63)) & 1;
}

namespace {

// Bits start, start+1, ... of a cyclic row of G bits, 64 at a time.
std::uint64_t cyclic_read(const std::uint64_t* row, std::int64_t G, std::int64_t start) {
  if (start + 64 <= G) {
    const auto w = start >> 6;
    const int b = static_cast<int>(start & 63);
    return b == 0 ? row[w] : (row[w] >> b) | (row[w + 1] << (64 - b));
  }
  std::uint64_t out = 0;
  std::int64_t pos = start;
  for (int i = 0; i < 64; ++i) {
    out |= ((row[pos >> 6] >> (pos & 63)) & 1) << i;
    if (++pos == G) pos = 0;
  }
  return out;
}

}  // namespace

std::uint64_t TorusGridSet::intersection_count(const std::vector<std::vector<std::int64_t>>& shifts) const {
  const auto W = words_per_row();
  const std::uint64_t tail_mask = (G_ & 63) ? (std::uint64_t{1} << (G_ & 63)) - 1 : ~std::uint64_t{0};
  std::vector<std::int64_t> idx(static_cast<std::size_t>(d_ - 1), 0);
  std::vector<std::int64_t> src_rows(shifts.size()), src_cols(shifts.size());
  for (std::size_t j = 0; j < shifts.size(); ++j) {
    if (static_cast<int>(shifts[j].size()) != d_) throw Error(Errc::invalid_argument, "shift dimension mismatch");
    src_cols[j] = ((shifts[j][d_ - 1] % G_) + G_) % G_;
  }
  std::uint64_t total = 0;
  for (std::int64_t r = 0; r < rows(); ++r) {
    for (std::size_t j = 0; j < shifts.size(); ++j) {
      std::int64_t sr = 0;
      for (int a = 0; a + 1 < d_; ++a) sr = sr * G_ + (((idx[a] + shifts[j][a]) % G_) + G_) % G_;
      src_rows[j] = sr;
    }
    const auto* base = row(r);
    for (std::int64_t w = 0; w < W; ++w) {
      std::uint64_t acc = base[w];
      for (std::size_t j = 0; j < shifts.size() && acc; ++j) {
        std::int64_t start = src_cols[j] + w * 64;
        if (start >= G_) start -= G_;
        acc &= cyclic_read(row(src_rows[j]), G_, start);
      }
      if (w == W - 1) acc &= tail_mask;
      total += static_cast<std::uint64_t>(std::popcount(acc));
    }
    for (int a = d_ - 2; a >= 0 && ++idx[a] == G_; --a) idx[a] = 0;
  }
  return total;
}

ScanReport torus_recurrence_scan(const TorusGridSet& D, const std::vector<FixedPointReal>& alphas,
                                 const PolyVec& polys, double eps, Window n_range, const NFilter& filter) {
  if (static_cast<int>(alphas.size()) != D.dim()) throw Error(Errc::invalid_argument, "need one alpha per axis");
  if (!(eps > 0.0 && eps < 1.0)) throw Error(Errc::invalid_argument, "eps must lie in (0,1)");
  if (n_range.empty()) throw Error(Errc::invalid_argument, "empty n_range");
  const auto G = D.G();
  if (eps * static_cast<double>(G) <= 1.0) {
    throw Error(Errc::resolution_too_coarse, "eps = " + std::to_string(eps) + " is not resolved by G = " + std::to_string(G));
  }
  if (D.min_feature() * static_cast<double>(G) < 1.0) {
    throw Error(Errc::resolution_too_coarse, "a box side is narrower than one grid cell");
  }
  ScanReport r;
  r.threshold = D.measure().value() - eps;
  r.strict = true;
  r.n_range = n_range;
  for (std::int64_t n = n_range.lo; n < n_range.hi; ++n) {
    if (!filter || filter(n)) r.entries.push_back({n, {0, 1}, ScanFlag::ok});
  }
  const auto cells = D.cells();
  parallel_for(r.entries.size(), [&](std::size_t i) {
    auto& en = r.entries[i];
    std::vector<std::vector<std::int64_t>> shifts;
    try {
      for (const auto& p : polys.polys()) {
        const std::int64_t m = p(en.n);
        std::vector<std::int64_t> s;
        for (const auto& a : alphas) {
          const auto sc = a.times(m).scaled(static_cast<std::uint64_t>(G));
          s.push_back(static_cast<std::int64_t>((sc.floor + (sc.upper_half ? 1 : 0)) % static_cast<std::uint64_t>(G)));
        }
        shifts.push_back(std::move(s));
      }
    } catch (const Error& err) {
      if (err.code() != Errc::overflow) throw;
      en.flag = ScanFlag::out_of_range;
      return;
    }
    en.density = {static_cast<std::int64_t>(D.intersection_count(shifts)), cells};
  });
  summarize(r);
  return r;
}

}  // namespace sumlab
