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
#include "sumlab/recipes.hpp"

#include <cmath>
#include <random>
#include <string>

namespace sumlab {

namespace {

// Exact dyadic rendering of a double in [0, 1) (truncated below 2^-frac_bits).
FixedPointReal from_unit_double(double x, int frac_bits) {
  BigInt m;
  mpz_set_d(m.get_mpz_t(), std::ldexp(x, frac_bits));
  return FixedPointReal::from_mantissa(m, frac_bits);
}

}  // namespace

WindowSet bernoulli_set(Window window, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(Errc::invalid_argument, "Bernoulli p must lie in [0,1]");
  if (window.empty()) throw Error(Errc::invalid_argument, "empty window");
  std::mt19937_64 rng(seed);
  const auto len = window.length();
  std::vector<std::uint64_t> words(static_cast<std::size_t>((len + 63) / 64), 0);
  const bool always = p >= 1.0;
  // p < 1 so p * 2^64 < 2^64 and the long double product is exact for p with 53 bits.
  const auto threshold = always ? 0 : static_cast<std::uint64_t>(std::ldexp(static_cast<long double>(p), 64));
  for (std::int64_t i = 0; i < len; ++i) {
    const std::uint64_t draw = rng();
    if (always || draw < threshold) words[i >> 6] |= std::uint64_t{1} << (i & 63);
  }
  return WindowSet::from_words(window, window, std::move(words));
}

WindowSet periodic_set(Window window, std::int64_t period, const std::vector<std::int64_t>& residues) {
  if (period <= 0) throw Error(Errc::invalid_argument, "period must be positive");
  std::vector<bool> hit(static_cast<std::size_t>(period), false);
  for (auto r : residues) hit[static_cast<std::size_t>(((r % period) + period) % period)] = true;
  return WindowSet::from_predicate(window, [&](std::int64_t n) {
    return static_cast<bool>(hit[static_cast<std::size_t>(((n % period) + period) % period)]);
  });
}

WindowSet power_rotation_set(Window window, int k, const FixedPointReal& alpha, double lo, double hi) {
  if (k < 1) throw Error(Errc::invalid_argument, "k must be at least 1");
  if (!(0.0 <= lo && lo < hi && hi <= 1.0)) throw Error(Errc::invalid_argument, "need 0 <= lo < hi <= 1");
  const int bits = alpha.frac_bits();
  const FixedPointReal lo_fp = from_unit_double(lo, bits);
  const bool hi_is_one = hi >= 1.0;
  const FixedPointReal hi_fp = hi_is_one ? FixedPointReal(bits) : from_unit_double(hi, bits);
  return WindowSet::from_predicate(window, [&](std::int64_t n) {
    BigInt nk = n;
    mpz_pow_ui(nk.get_mpz_t(), nk.get_mpz_t(), static_cast<unsigned long>(k));
    const FixedPointReal v = alpha.times(nk);
    return lo_fp <= v && (hi_is_one || v < hi_fp);
  });
}

FiniteOffsets powers_of(std::int64_t base, int max_exp) {
  if (base < 2 || max_exp < 0) throw Error(Errc::invalid_argument, "powers_of needs base >= 2, max_exp >= 0");
  std::vector<std::int64_t> out{1};
  for (int e = 1; e <= max_exp; ++e) {
    if (out.back() > INT64_MAX / base) throw Error(Errc::overflow, "base^" + std::to_string(e) + " exceeds 64 bits");
    out.push_back(out.back() * base);
  }
  return FiniteOffsets(std::move(out));
}

}  // namespace sumlab
