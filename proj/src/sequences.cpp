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

#include "sumlab/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

#include <mpfr.h>

namespace sumlab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kHalfPi = 1.5707963267948966192313216916398;

// Neumaier's variant of Kahan summation.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;
  void add(double x) {
    const double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + comp; }
};

std::vector<std::int64_t> primes_up_to(std::int64_t j) {
  std::vector<std::int64_t> out;
  if (j < 2) return out;
  std::vector<bool> composite(static_cast<std::size_t>(j) + 1, false);
  for (std::int64_t p = 2; p <= j; ++p) {
    if (composite[p]) continue;
    out.push_back(p);
    for (std::int64_t q = p * p; q <= j; q += p) composite[q] = true;
  }
  return out;
}

u128 isqrt(u128 x) {
  u128 r = static_cast<u128>(std::sqrt(static_cast<long double>(x)));
  while (r * r > x) --r;
  while ((r + 1) * (r + 1) <= x) ++r;
  return r;
}

}  // namespace

Angle Angle::from_radians(double radians) { return Angle{radians / kTwoPi}; }
double Angle::radians() const { return turns * kTwoPi; }

std::complex<double> unit_phase(double frac) {
  // Reduce to the nearest quarter turn so that multiples of 1/4 are exact.
  const double q4 = 4.0 * (frac - std::floor(frac));
  const double q = std::nearbyint(q4);
  const double r = (q4 - q) * kHalfPi;
  const std::complex<double> base{std::cos(r), std::sin(r)};
  switch (static_cast<int>(q) & 3) {
    case 0: return base;
    case 1: return {-base.imag(), base.real()};
    case 2: return -base;
    default: return {base.imag(), -base.real()};
  }
}

double frac_of_product(std::int64_t n, double turns) {
  if (turns < 0) return frac_of_product(-n, -turns);  // -n stays in range for n > INT64_MIN
  if (turns == 0 || n == 0) return 0.0;
  int e = 0;
  const double m = std::frexp(turns, &e);  // turns = m * 2^e, m in [0.5, 1)
  const auto mant = static_cast<std::int64_t>(std::ldexp(m, 53));
  const int shift = 53 - e;  // turns = mant / 2^shift
  if (shift <= 0) return 0.0;
  if (shift >= 126) {
    // turns < 2^-73 so |n * turns| < 2^-10 and the double product is already accurate.
    const double p = static_cast<double>(n) * turns;
    return p - std::floor(p);
  }
  const u128 prod = static_cast<u128>(static_cast<i128>(n) * mant);  // two's complement gives the residue mod 2^shift
  const u128 low = prod & ((static_cast<u128>(1) << shift) - 1);
  const double f = std::ldexp(static_cast<double>(low), -shift);
  return f >= 1.0 ? 0.0 : f;
}

SequenceFamily SequenceFamily::parse(std::string_view name) {
  if (name == "squares") return SequenceFamily(FamilyKind::squares);
  if (name == "primes") return SequenceFamily(FamilyKind::primes);
  if (name == "blocks") return SequenceFamily(FamilyKind::blocks);
  if (name == "floor_pow_5_2" || name == "floor_pow") return SequenceFamily(FamilyKind::floor_pow_5_2);
  if (name == "poly_floor") return SequenceFamily(FamilyKind::poly_floor);
  throw Error(Errc::parse_error, "unknown sequence family '" + std::string(name) + "'");
}

std::string_view SequenceFamily::name() const {
  switch (kind_) {
    case FamilyKind::squares: return "squares";
    case FamilyKind::primes: return "primes";
    case FamilyKind::blocks: return "blocks";
    case FamilyKind::floor_pow_5_2: return "floor_pow_5_2";
    case FamilyKind::poly_floor: return "poly_floor";
  }
  return "?";
}

bool SequenceFamily::has_exceptional_frequencies() const {
  return kind_ == FamilyKind::squares || kind_ == FamilyKind::primes;
}

std::vector<std::int64_t> SequenceFamily::generate(std::int64_t j) const {
  if (j < 1) throw Error(Errc::invalid_argument, "j must be at least 1");
  std::vector<std::int64_t> out;
  switch (kind_) {
    case FamilyKind::squares:
      if (j > 3037000499) throw Error(Errc::overflow, "j^2 exceeds 64 bits");
      out.reserve(static_cast<std::size_t>(j));
      for (std::int64_t m = 1; m <= j; ++m) out.push_back(m * m);
      break;
    case FamilyKind::primes:
      if (j > kPrimeSieveLimit) throw Error(Errc::invalid_argument, "primes are sieved only up to 10^8");
      out = primes_up_to(j);
      if (out.empty()) throw Error(Errc::invalid_argument, "no primes up to " + std::to_string(j));
      break;
    case FamilyKind::blocks:
      if (j >= 63) throw Error(Errc::overflow, "2^j + j exceeds 64 bits for j = " + std::to_string(j));
      out.reserve(static_cast<std::size_t>(j));
      for (std::int64_t i = 0; i < j; ++i) out.push_back((std::int64_t{1} << j) + i);
      break;
    case FamilyKind::floor_pow_5_2:
      // m^{5/2} < 2^63 needs m < 3.9e7; m^5 then still fits in 128 bits.
      if (j > 39'000'000) throw Error(Errc::overflow, "floor(m^(5/2)) exceeds 64 bits");
      out.reserve(static_cast<std::size_t>(j));
      for (std::int64_t m = 1; m <= j; ++m) {
        const u128 mm = static_cast<u128>(m);
        out.push_back(static_cast<std::int64_t>(isqrt(mm * mm * mm * mm * mm)));
      }
      break;
    case FamilyKind::poly_floor: {
      out.reserve(static_cast<std::size_t>(j));
      mpfr_t sqrt2, pi, a, b;
      mpfr_inits2(256, sqrt2, pi, a, b, static_cast<mpfr_ptr>(nullptr));
      mpfr_sqrt_ui(sqrt2, 2, MPFR_RNDN);
      mpfr_const_pi(pi, MPFR_RNDN);
      BigInt fl;
      bool overflow = false;
      for (std::int64_t m = 1; m <= j && !overflow; ++m) {
        const BigInt m3 = BigInt(m) * m * m;
        const BigInt m5 = m3 * m * m;
        mpfr_mul_z(a, sqrt2, m5.get_mpz_t(), MPFR_RNDN);
        mpfr_mul_z(b, pi, m3.get_mpz_t(), MPFR_RNDN);
        mpfr_sub(a, a, b, MPFR_RNDN);
        mpfr_get_z(fl.get_mpz_t(), a, MPFR_RNDD);
        if (!fl.fits_slong_p()) {
          overflow = true;
        } else {
          out.push_back(fl.get_si());
        }
      }
      mpfr_clears(sqrt2, pi, a, b, static_cast<mpfr_ptr>(nullptr));
      if (overflow) throw Error(Errc::overflow, "floor(sqrt2 m^5 - pi m^3) exceeds 64 bits");
      break;
    }
  }
  return out;
}

std::vector<std::int64_t> SequenceFamily::generate_translate(std::int64_t j) const {
  if (kind_ != FamilyKind::blocks) return generate(j);
  if (j < 1) throw Error(Errc::invalid_argument, "j must be at least 1");
  std::vector<std::int64_t> out(static_cast<std::size_t>(j));
  std::iota(out.begin(), out.end(), std::int64_t{0});
  return out;
}

std::complex<double> weyl_average(std::span<const std::int64_t> sj, Angle theta) {
  if (sj.empty()) throw Error(Errc::invalid_argument, "S_j must be nonempty");
  if (!(theta.turns > 0.0 && theta.turns < 1.0)) {
    throw Error(Errc::invalid_argument, "theta must lie in (0, 2pi)");
  }
  CompensatedSum re, im;
  for (auto n : sj) {
    const auto z = unit_phase(frac_of_product(n, theta.turns));
    re.add(z.real());
    im.add(z.imag());
  }
  const double size = static_cast<double>(sj.size());
  return {re.value() / size, im.value() / size};
}

WeylProfile equidist_profile(const SequenceFamily& family, std::int64_t j, std::span<const Angle> thetas,
                             double tolerance) {
  WeylProfile p;
  p.j = j;
  p.tolerance = tolerance;
  p.thetas.assign(thetas.begin(), thetas.end());
  const auto sj = family.generate_translate(j);
  p.magnitudes.reserve(thetas.size());
  for (const auto& t : thetas) {
    const double mag = std::min(1.0, std::abs(weyl_average(sj, t)));
    p.magnitudes.push_back(mag);
    if (mag > tolerance) p.exceptional.push_back(t);
  }
  return p;
}

std::vector<Angle> analytic_suspects(const SequenceFamily& family, int max_den) {
  std::vector<Angle> out;
  if (!family.has_exceptional_frequencies()) return out;
  std::vector<std::pair<int, int>> fracs;
  for (int q = 2; q <= max_den; ++q) {
    for (int a = 1; a < q; ++a) {
      if (std::gcd(a, q) == 1) fracs.emplace_back(a, q);
    }
  }
  std::sort(fracs.begin(), fracs.end(), [](auto x, auto y) {
    return static_cast<long long>(x.first) * y.second < static_cast<long long>(y.first) * x.second;
  });
  for (auto [a, q] : fracs) out.push_back(Angle::from_turns(static_cast<double>(a) / q));
  return out;
}

std::vector<Angle> generic_theta_grid(int count) {
  const double golden = 0.61803398874989484820458683436564;
  std::vector<Angle> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i) out.push_back(Angle::from_turns(frac_of_product(i + 1, golden)));
  return out;
}

void write_csv(std::ostream& out, const WeylProfile& profile) {
  out << "theta,magnitude\n";
  const auto old = out.precision(17);
  for (std::size_t i = 0; i < profile.thetas.size(); ++i) {
    out << profile.thetas[i].radians() << ',' << profile.magnitudes[i] << '\n';
  }
  out.precision(old);
}

FixedPointReal frac_part_power(std::int64_t n, int k, const FixedPointReal& alpha) {
  if (k < 1) throw Error(Errc::invalid_argument, "k must be at least 1");
  if (n < 0) throw Error(Errc::invalid_argument, "n must be nonnegative");
  BigInt nk;
  mpz_ui_pow_ui(nk.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return alpha.times(nk);
}

namespace {

enum class Verdict { member, non_member, ambiguous };

// alpha is stored rounded down, so the true {n^k alpha} lies in [v, v + n^k ulp).
Verdict classify(std::int64_t n, int k, const FixedPointReal& alpha) {
  BigInt nk;
  mpz_ui_pow_ui(nk.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  const FixedPointReal v = alpha.times(nk);
  const int bits = v.frac_bits();
  const BigInt mant = v.mantissa();
  const BigInt quarter = BigInt(1) << (bits - 2);
  for (const BigInt& edge : {quarter, BigInt(3 * quarter)}) {
    const BigInt d = edge - mant;
    if (sgn(d) >= 0 && d < nk) return Verdict::ambiguous;
  }
  return (mant > quarter && mant < 3 * quarter) ? Verdict::member : Verdict::non_member;
}

}  // namespace

IntersectiveMembers intersective_members(int k, const FixedPointReal& alpha, Window n_range) {
  if (k < 1) throw Error(Errc::invalid_argument, "k must be at least 1");
  if (n_range.lo < 0) throw Error(Errc::invalid_argument, "n_range must be nonnegative");
  IntersectiveMembers out;
  std::vector<std::int64_t> retry;
  for (std::int64_t n = n_range.lo; n < n_range.hi; ++n) {
    switch (classify(n, k, alpha)) {
      case Verdict::member: out.members.push_back(n); break;
      case Verdict::non_member: break;
      case Verdict::ambiguous: retry.push_back(n); break;
    }
  }
  if (retry.empty()) return out;
  const FixedPointReal fine = alpha.at_precision(2 * alpha.frac_bits());
  for (auto n : retry) {
    switch (classify(n, k, fine)) {
      case Verdict::member: out.members.push_back(n); break;
      case Verdict::non_member: break;
      case Verdict::ambiguous: out.ambiguous.push_back(n); break;
    }
  }
  std::sort(out.members.begin(), out.members.end());
  return out;
}

}  // namespace sumlab
