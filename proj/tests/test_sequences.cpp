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


#include <doctest.h>

#include <cmath>
#include <complex>
#include <sstream>

#include <mpfr.h>

#include "sumlab/sequences.hpp"

using namespace sumlab;
using Elems = std::vector<std::int64_t>;

namespace {

// Direct summation of e^{2πi·n·turns} with 256-bit MPFR phases.
std::complex<double> mpfr_weyl(const Elems& s, double turns) {
  mpfr_t t, x, c, sn, re, im;
  for (auto* v : {&t, &x, &c, &sn, &re, &im}) mpfr_init2(*v, 256);
  mpfr_set_d(t, turns, MPFR_RNDN);
  mpfr_set_zero(re, 1);
  mpfr_set_zero(im, 1);
  for (auto n : s) {
    mpfr_mul_si(x, t, n, MPFR_RNDN);
    mpfr_frac(x, x, MPFR_RNDN);
    mpfr_const_pi(c, MPFR_RNDN);
    mpfr_mul(x, x, c, MPFR_RNDN);
    mpfr_mul_2ui(x, x, 1, MPFR_RNDN);
    mpfr_sin_cos(sn, c, x, MPFR_RNDN);
    mpfr_add(re, re, c, MPFR_RNDN);
    mpfr_add(im, im, sn, MPFR_RNDN);
  }
  const double size = static_cast<double>(s.size());
  const std::complex<double> out(mpfr_get_d(re, MPFR_RNDN) / size, mpfr_get_d(im, MPFR_RNDN) / size);
  for (auto* v : {&t, &x, &c, &sn, &re, &im}) mpfr_clear(*v);
  return out;
}

}  // namespace

TEST_CASE("family members") {
  CHECK(SequenceFamily(FamilyKind::squares).generate(4) == Elems{1, 4, 9, 16});
  CHECK(SequenceFamily(FamilyKind::primes).generate(10) == Elems{2, 3, 5, 7});
  CHECK(SequenceFamily(FamilyKind::blocks).generate(3) == Elems{8, 9, 10});
  CHECK(SequenceFamily(FamilyKind::floor_pow_5_2).generate(3) == Elems{1, 5, 15});
  CHECK(SequenceFamily(FamilyKind::floor_pow_5_2).generate(7) == Elems{1, 5, 15, 32, 55, 88, 129});
  CHECK(SequenceFamily(FamilyKind::poly_floor).generate(7) == Elems{-2, 20, 258, 1247, 4026, 10318, 22691});
  CHECK(SequenceFamily(FamilyKind::primes).generate(1000000).size() == 78498);
  CHECK(SequenceFamily::parse("floor_pow").kind() == FamilyKind::floor_pow_5_2);
  CHECK_THROWS_AS(SequenceFamily::parse("cubes"), Error);
}

TEST_CASE("large elements match the high-precision values") {
  const auto fp = SequenceFamily(FamilyKind::floor_pow_5_2).generate(100000);
  CHECK(fp[99998] == 3162198603819);
  CHECK(fp[99999] == 3162277660168);
  const auto pf = SequenceFamily(FamilyKind::poly_floor).generate(5792);
  CHECK(pf[4999] == 4419416989716840328);
  CHECK(pf[5791] == 9218446403504954206);
  for (std::size_t i = 1; i < pf.size(); ++i) REQUIRE(pf[i] > pf[i - 1]);
}

TEST_CASE("elements past 64 bits are rejected") {
  auto overflows = [](FamilyKind k, std::int64_t j) {
    try {
      (void)SequenceFamily(k).generate(j);
    } catch (const Error& e) {
      return e.code() == Errc::overflow;
    }
    return false;
  };
  CHECK(overflows(FamilyKind::poly_floor, 5793));
  CHECK(overflows(FamilyKind::blocks, 63));
  CHECK(overflows(FamilyKind::squares, 3037000500));
  CHECK(SequenceFamily(FamilyKind::blocks).generate_translate(10000).size() == 10000);
}

TEST_CASE("weyl_average basic identities") {
  Elems run;
  for (std::int64_t n = 1; n <= 2000; ++n) run.push_back(n);
  CHECK(weyl_average(run, Angle::from_turns(0.5)) == std::complex<double>(0.0, 0.0));
  CHECK_THROWS_AS(weyl_average(run, Angle::from_turns(0.0)), Error);
  CHECK_THROWS_AS(weyl_average(run, Angle::from_turns(1.0)), Error);

  const auto sq = SequenceFamily(FamilyKind::squares).generate(100000);
  const auto q = weyl_average(sq, Angle::from_radians(M_PI / 2));
  CHECK(std::abs(q - std::complex<double>(0.5, 0.5)) < 0.01);
}

TEST_CASE("weyl_average agrees with the MPFR summation") {
  const auto fp = SequenceFamily(FamilyKind::floor_pow_5_2).generate(2000);
  const auto pr = SequenceFamily(FamilyKind::primes).generate(5000);
  for (double t : {0.1234567, 0.5 + 1e-7, 0.7071067811865476, 0.999}) {
    CHECK(std::abs(weyl_average(fp, Angle::from_turns(t)) - mpfr_weyl(fp, t)) < 1e-12);
    CHECK(std::abs(weyl_average(pr, Angle::from_turns(t)) - mpfr_weyl(pr, t)) < 1e-12);
  }
}

TEST_CASE("weyl_average bounded and conjugate symmetric") {
  const auto pf = SequenceFamily(FamilyKind::poly_floor).generate(3000);
  for (const auto& th : generic_theta_grid(25)) {
    const auto a = weyl_average(pf, th);
    const auto b = weyl_average(pf, Angle::from_turns(1.0 - th.turns));
    CHECK(std::abs(a) <= 1.0);
    CHECK(std::abs(a - std::conj(b)) < 1e-12);
  }
}

TEST_CASE("equidist profiles") {
  const auto grid = generic_theta_grid(100);
  const SequenceFamily blocks(FamilyKind::blocks);
  const auto bp = equidist_profile(blocks, 10000, grid, 0.05);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double bound = 2.0 / (10000.0 * std::abs(1.0 - std::polar(1.0, grid[i].radians())));
    REQUIRE(bp.magnitudes[i] <= bound);
  }

  const SequenceFamily squares(FamilyKind::squares);
  std::vector<Angle> with_quarter = grid;
  with_quarter.push_back(Angle::from_turns(0.25));
  const auto sp = equidist_profile(squares, 100000, with_quarter, 0.05);
  REQUIRE(!sp.exceptional.empty());
  CHECK(sp.exceptional.back().turns == 0.25);
  CHECK(sp.magnitudes.back() == doctest::Approx(std::sqrt(0.5)).epsilon(1e-3));

  const auto fp = equidist_profile(SequenceFamily(FamilyKind::floor_pow_5_2), 100000, grid, 0.05);
  CHECK(fp.exceptional.empty());

  std::ostringstream csv;
  write_csv(csv, fp);
  CHECK(csv.str().rfind("theta,magnitude\n", 0) == 0);
}

TEST_CASE("analytic suspects and the generic grid") {
  const auto s = analytic_suspects(SequenceFamily(FamilyKind::squares), 4);
  REQUIRE(s.size() == 5);
  CHECK(s[0].turns == 0.25);
  CHECK(s[2].turns == 0.5);
  CHECK(s[4].turns == 0.75);
  CHECK(analytic_suspects(SequenceFamily(FamilyKind::floor_pow_5_2), 6).empty());
  const auto g = generic_theta_grid(3);
  CHECK(g[0].turns == doctest::Approx(0.6180339887498949));
  CHECK(g[1].turns == doctest::Approx(0.2360679774997898));
}

TEST_CASE("frac_part_power") {
  const auto a = FixedPointReal::parse("sqrt2");
  CHECK(frac_part_power(0, 3, a).is_zero());
  CHECK(frac_part_power(1, 5, a) == a);
  CHECK(frac_part_power(1000000, 2, a).to_decimal(40) == "0.0950488016887242096980785696718753769480");
  CHECK(frac_part_power(1000000, 3, a).to_decimal(30) == "0.801688724209698078569671875376");
  for (std::int64_t n = 1; n < 200; ++n) REQUIRE(frac_part_power(n + 1, 1, a) - frac_part_power(n, 1, a) == a);
}

TEST_CASE("intersective members") {
  const auto a = FixedPointReal::parse("sqrt2");
  const auto small = intersective_members(1, a, {1, 3});
  CHECK(small.members == Elems{1});
  CHECK(small.ambiguous.empty());

  const auto r = intersective_members(1, a, {1, 100001});
  CHECK(std::abs(static_cast<double>(r.members.size()) / 100000.0 - 0.5) < 0.01);
  CHECK(r.ambiguous.empty());

  // α = 1/4 lands exactly on an endpoint for every odd n.
  const auto quarter = intersective_members(1, FixedPointReal::parse("0.25"), {1, 9});
  CHECK(quarter.members == Elems{2, 6});
  CHECK(quarter.ambiguous == Elems{1, 3, 5, 7});
}
