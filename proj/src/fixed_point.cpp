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

#include "sumlab/fixed_point.hpp"

#include <array>
#include <bit>
#include <cctype>
#include <cmath>

#include <gmp.h>
#include <mpfr.h>

static_assert(sizeof(mp_limb_t) == sizeof(std::uint64_t), "64-bit GMP limbs required");

namespace sumlab {

namespace {

void check_bits(int frac_bits) {
  if (frac_bits < FixedPointReal::kMinBits || frac_bits % 64 != 0) {
    throw Error(Errc::invalid_argument, "frac_bits must be a multiple of 64 and at least 192");
  }
}

BigInt pow2(int bits) {
  BigInt p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(bits));
  return p;
}

// floor(sqrt(k) * 2^bits)
BigInt scaled_sqrt(unsigned long k, int bits) {
  BigInt radicand = pow2(2 * bits) * k;
  BigInt root;
  mpz_sqrt(root.get_mpz_t(), radicand.get_mpz_t());
  return root;
}

BigInt scaled_pi(int bits) {
  mpfr_t pi;
  mpfr_init2(pi, bits + 128);
  mpfr_const_pi(pi, MPFR_RNDD);
  mpfr_mul_2si(pi, pi, bits, MPFR_RNDD);
  BigInt out;
  mpfr_get_z(out.get_mpz_t(), pi, MPFR_RNDD);
  mpfr_clear(pi);
  return out;
}

// Exact rational for "[-]digits[.digits]" or "[-]p/q".
mpq_class parse_rational(std::string_view text) {
  std::string s(text);
  if (s.find('/') != std::string::npos) {
    mpq_class q;
    if (q.set_str(s, 10) != 0) throw Error(Errc::parse_error, "bad rational literal '" + s + "'");
    if (q.get_den() == 0) throw Error(Errc::parse_error, "zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
  }
  std::size_t i = 0;
  bool neg = false;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) neg = s[i++] == '-';
  std::string digits;
  std::size_t frac_digits = 0;
  bool seen_point = false, any = false;
  for (; i < s.size(); ++i) {
    const char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      any = true;
      if (seen_point) ++frac_digits;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      throw Error(Errc::parse_error, "bad decimal literal '" + s + "'");
    }
  }
  if (!any) throw Error(Errc::parse_error, "bad decimal literal '" + s + "'");
  BigInt num(digits, 10);
  BigInt den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_digits);
  mpq_class q(neg ? BigInt(-num) : num, den);
  q.canonicalize();
  return q;
}

}  // namespace

FixedPointReal::FixedPointReal(int frac_bits) {
  check_bits(frac_bits);
  limbs_.assign(static_cast<std::size_t>(frac_bits / 64), 0);
}

FixedPointReal FixedPointReal::from_mantissa(const BigInt& mantissa, int frac_bits) {
  FixedPointReal out(frac_bits);
  BigInt m;
  mpz_fdiv_r_2exp(m.get_mpz_t(), mantissa.get_mpz_t(), static_cast<mp_bitcnt_t>(frac_bits));
  std::size_t count = 0;
  mpz_export(out.limbs_.data(), &count, -1, sizeof(std::uint64_t), 0, 0, m.get_mpz_t());
  return out;
}

FixedPointReal FixedPointReal::from_ulps(const BigInt& k, int frac_bits) { return from_mantissa(k, frac_bits); }

FixedPointReal FixedPointReal::dyadic(std::uint64_t num, int log2_den, int frac_bits) {
  if (log2_den < 0 || log2_den > frac_bits) throw Error(Errc::invalid_argument, "dyadic denominator out of range");
  return from_mantissa(BigInt(static_cast<unsigned long>(num)) << (frac_bits - log2_den), frac_bits);
}

FixedPointReal FixedPointReal::parse(std::string_view spec, int frac_bits) {
  check_bits(frac_bits);
  BigInt mant;
  if (spec == "sqrt2") {
    mant = scaled_sqrt(2, frac_bits);
  } else if (spec == "sqrt3") {
    mant = scaled_sqrt(3, frac_bits);
  } else if (spec == "golden") {
    // (sqrt5 - 1)/2, the golden ratio mod 1
    mant = (scaled_sqrt(5, frac_bits) - pow2(frac_bits)) / 2;
  } else if (spec == "pi_frac") {
    mant = scaled_pi(frac_bits);
  } else {
    const mpq_class q = parse_rational(spec);
    BigInt scaled_num = q.get_num() << frac_bits;
    mpz_fdiv_q(mant.get_mpz_t(), scaled_num.get_mpz_t(), q.get_den().get_mpz_t());
  }
  FixedPointReal out = from_mantissa(mant, frac_bits);
  out.source_ = std::string(spec);
  return out;
}

BigInt FixedPointReal::mantissa() const {
  BigInt m;
  mpz_import(m.get_mpz_t(), limbs_.size(), -1, sizeof(std::uint64_t), 0, 0, limbs_.data());
  return m;
}

FixedPointReal FixedPointReal::at_precision(int frac_bits) const {
  if (!source_.empty()) return parse(source_, frac_bits);
  check_bits(frac_bits);
  const int shift = frac_bits - this->frac_bits();
  BigInt m = mantissa();
  if (shift >= 0) m <<= shift;
  else m >>= -shift;
  return from_mantissa(m, frac_bits);
}

bool FixedPointReal::is_zero() const {
  for (auto l : limbs_) {
    if (l) return false;
  }
  return true;
}

double FixedPointReal::to_double() const {
  const std::size_t n = limbs_.size();
  return std::ldexp(static_cast<double>(limbs_[n - 1]), -64) + std::ldexp(static_cast<double>(limbs_[n - 2]), -128);
}

std::string FixedPointReal::to_decimal(int digits) const {
  BigInt ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  const BigInt scaled = (mantissa() * ten_pow) >> frac_bits();
  std::string body = scaled.get_str();
  if (static_cast<int>(body.size()) < digits) body.insert(0, static_cast<std::size_t>(digits) - body.size(), '0');
  return "0." + body;
}

FixedPointReal FixedPointReal::operator+(const FixedPointReal& other) const {
  if (other.limbs_.size() != limbs_.size()) throw Error(Errc::invalid_argument, "precision mismatch in addition");
  FixedPointReal out(frac_bits());
  mpn_add_n(reinterpret_cast<mp_limb_t*>(out.limbs_.data()), reinterpret_cast<const mp_limb_t*>(limbs_.data()),
            reinterpret_cast<const mp_limb_t*>(other.limbs_.data()), static_cast<mp_size_t>(limbs_.size()));
  return out;
}

FixedPointReal FixedPointReal::operator-(const FixedPointReal& other) const {
  if (other.limbs_.size() != limbs_.size()) throw Error(Errc::invalid_argument, "precision mismatch in subtraction");
  FixedPointReal out(frac_bits());
  mpn_sub_n(reinterpret_cast<mp_limb_t*>(out.limbs_.data()), reinterpret_cast<const mp_limb_t*>(limbs_.data()),
            reinterpret_cast<const mp_limb_t*>(other.limbs_.data()), static_cast<mp_size_t>(limbs_.size()));
  return out;
}

FixedPointReal FixedPointReal::negated() const { return FixedPointReal(frac_bits()) - *this; }

FixedPointReal FixedPointReal::times_magnitude(const std::uint64_t* mag, std::size_t mag_limbs, bool negative) const {
  while (mag_limbs > 0 && mag[mag_limbs - 1] == 0) --mag_limbs;
  FixedPointReal out(frac_bits());
  if (mag_limbs == 0) return out;
  const std::size_t n = limbs_.size();
  // The precision budget guarantees mag_limbs < n, so mpn_mul's size order holds.
  std::array<std::uint64_t, 64> stack{};
  std::vector<std::uint64_t> heap;
  std::uint64_t* prod = stack.data();
  if (n + mag_limbs > stack.size()) {
    heap.resize(n + mag_limbs);
    prod = heap.data();
  }
  mpn_mul(reinterpret_cast<mp_limb_t*>(prod), reinterpret_cast<const mp_limb_t*>(limbs_.data()),
          static_cast<mp_size_t>(n), reinterpret_cast<const mp_limb_t*>(mag), static_cast<mp_size_t>(mag_limbs));
  std::copy(prod, prod + n, out.limbs_.begin());
  return negative ? out.negated() : out;
}

FixedPointReal FixedPointReal::times(std::int64_t m) const { return times(static_cast<i128>(m)); }

FixedPointReal FixedPointReal::times(i128 m) const {
  const bool neg = m < 0;
  const u128 mag = neg ? static_cast<u128>(-(m + 1)) + 1 : static_cast<u128>(m);
  const std::array<std::uint64_t, 2> limbs{static_cast<std::uint64_t>(mag), static_cast<std::uint64_t>(mag >> 64)};
  const int bitlen = limbs[1] ? 128 - std::countl_zero(limbs[1]) : 64 - std::countl_zero(limbs[0]);
  if (bitlen > frac_bits() - 64) check_precision_budget(to_big(m), frac_bits());
  return times_magnitude(limbs.data(), 2, neg);
}

FixedPointReal FixedPointReal::times(const BigInt& m) const {
  check_precision_budget(m, frac_bits());
  const BigInt mag = abs(m);
  std::vector<std::uint64_t> limbs(mpz_size(mag.get_mpz_t()) + 1, 0);
  std::size_t count = 0;
  mpz_export(limbs.data(), &count, -1, sizeof(std::uint64_t), 0, 0, mag.get_mpz_t());
  return times_magnitude(limbs.data(), count, sgn(m) < 0);
}

FixedPointReal::Scaled FixedPointReal::scaled(std::uint64_t G) const {
  std::array<std::uint64_t, 64> stack{};
  std::vector<std::uint64_t> heap;
  std::uint64_t* prod = stack.data();
  if (limbs_.size() > stack.size()) {
    heap.resize(limbs_.size());
    prod = heap.data();
  }
  const mp_limb_t carry = mpn_mul_1(reinterpret_cast<mp_limb_t*>(prod), reinterpret_cast<const mp_limb_t*>(limbs_.data()),
                                    static_cast<mp_size_t>(limbs_.size()), G);
  return {static_cast<std::uint64_t>(carry), (prod[limbs_.size() - 1] >> 63) != 0};
}

std::strong_ordering operator<=>(const FixedPointReal& a, const FixedPointReal& b) {
  if (a.limbs_.size() != b.limbs_.size()) throw Error(Errc::invalid_argument, "precision mismatch in comparison");
  const int c = mpn_cmp(reinterpret_cast<const mp_limb_t*>(a.limbs_.data()), reinterpret_cast<const mp_limb_t*>(b.limbs_.data()),
                        static_cast<mp_size_t>(a.limbs_.size()));
  return c < 0 ? std::strong_ordering::less : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

void check_precision_budget(const BigInt& m, int frac_bits) {
  if (sgn(m) == 0) return;
  const auto bits = static_cast<int>(mpz_sizeinbase(m.get_mpz_t(), 2));
  if (bits > frac_bits - 64) {
    throw Error(Errc::precision_budget_exceeded,
                "multiplier of " + std::to_string(bits) + " bits exceeds budget at " + std::to_string(frac_bits) + " fractional bits");
  }
}

CircleInterval CircleInterval::parse(std::string_view lo, std::string_view hi, int frac_bits) {
  CircleInterval iv{FixedPointReal::parse(lo, frac_bits), FixedPointReal::parse(hi, frac_bits)};
  if (iv.lo == iv.hi) throw Error(Errc::invalid_argument, "circle interval endpoints coincide");
  return iv;
}

bool CircleInterval::contains(const FixedPointReal& x) const {
  if (wraps()) return x > lo || x < hi;
  return lo < x && x < hi;
}

double CircleInterval::width() const {
  const double w = hi.to_double() - lo.to_double();
  return w > 0 ? w : w + 1.0;
}

}  // namespace sumlab
