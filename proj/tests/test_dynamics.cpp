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
#include <cstdio>
#include <fstream>
#include <random>
#include <set>

#include "sumlab/dynamics.hpp"

using namespace sumlab;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// T applied n times, one exact fixed-point step at a time.
std::vector<FixedPointReal> step_oracle(const TorusSystem& sys, std::vector<FixedPointReal> x, int n) {
  const auto alphas = sys.alphas();
  for (int s = 0; s < n; ++s) {
    if (sys.kind() == TorusSystem::Kind::skew) {
      FixedPointReal shift = sys.beta();
      for (std::size_t i = 0; i < alphas.size(); ++i) shift = shift + x[i].times(sys.skew_coeffs()[i]);
      x.back() = x.back() + shift;
    }
    for (std::size_t i = 0; i < alphas.size(); ++i) x[i] = x[i] + alphas[i];
  }
  return x;
}

GridFunction random_real(int d, std::int64_t G, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Complex> v(static_cast<std::size_t>(std::pow(G, d)));
  for (auto& z : v) z = u(rng);
  return GridFunction(d, G, std::move(v));
}

}  // namespace

TEST_CASE("closed-form iteration equals repeated steps") {
  const auto skew = TorusSystem::preset("skew_quadratic", "sqrt2");
  const FixedPointReal zero;
  for (int n : {0, 1, 2, 12, 100}) {
    const auto p = iterate(skew, {zero, zero}, BigInt(n));
    CHECK(p[0] == skew.alphas()[0].times(n));
    CHECK(p[1] == skew.alphas()[0].times(n * n));
  }
  const auto sk3 = TorusSystem::skew({FixedPointReal::parse("sqrt2"), FixedPointReal::parse("golden")}, {3, -2},
                                     FixedPointReal::parse("1/7"));
  const std::vector<FixedPointReal> x0{FixedPointReal::parse("0.3"), FixedPointReal::parse("pi_frac"),
                                       FixedPointReal::parse("sqrt3")};
  for (int n : {0, 1, 5, 77, 250}) CHECK(iterate(sk3, x0, BigInt(n)) == step_oracle(sk3, x0, n));
  CHECK(iterate(sk3, iterate(sk3, x0, BigInt(123)), BigInt(-123)) == x0);

  const auto kr = TorusSystem::preset("kronecker1d", "sqrt2");
  CHECK(iterate(kr, {FixedPointReal::parse("0.3")}, BigInt(0))[0] == FixedPointReal::parse("0.3"));
  CHECK(iterate(kr, {zero}, BigInt(12))[0].to_decimal(20) == "0.97056274847714058562");
  CHECK_THROWS_AS(iterate(kr, {zero, zero}, BigInt(1)), Error);
}

TEST_CASE("grid transport is a bijection and preserves integrals") {
  const auto skew = TorusSystem::preset("skew_quadratic", "sqrt2");
  const auto f = random_real(2, 101, 3);
  for (long n : {1L, 7L, -13L, 1000L, 123456789L}) {
    const auto t = grid_transport(skew, BigInt(n), 101);
    const std::set<std::int64_t> rows(t.row_src.begin(), t.row_src.end());
    CHECK(rows.size() == 101);
    CHECK(std::abs(pullback(skew, f, BigInt(n)).mean() - f.mean()) < 1e-12);
  }
}

TEST_CASE("grid pullback follows the exact orbit of cell centers") {
  const std::int64_t G = 64;
  const auto skew = TorusSystem::preset("skew_quadratic", "sqrt3");
  std::vector<Complex> v(G * G);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i);
  const GridFunction f(2, G, v);
  for (int n : {1, 3, 10, 41}) {
    const auto g = pullback(skew, f, BigInt(n));
    for (std::int64_t cx = 0; cx < G; cx += 7) {
      for (std::int64_t cy = 0; cy < G; cy += 5) {
        // Centre (2c+1)/(2G) is exact in fixed point; round the image to the nearest cell.
        const auto x = FixedPointReal::from_mantissa(BigInt(2 * cx + 1) << (192 - 7), 192);
        const auto y = FixedPointReal::from_mantissa(BigInt(2 * cy + 1) << (192 - 7), 192);
        const auto img = step_oracle(skew, {x, y}, n);
        auto cell = [&](const FixedPointReal& z) { return static_cast<std::int64_t>(std::floor(z.to_double() * G)) % G; };
        REQUIRE(g[cx * G + cy].real() == static_cast<double>(cell(img[0]) * G + cell(img[1])));
      }
    }
  }
}

TEST_CASE("correlations of characters") {
  const std::int64_t G = 1019;
  const auto kr = TorusSystem::preset("kronecker1d", "sqrt2");
  const auto chi = GridFunction::character(1, G, 0);
  const double alpha = std::sqrt(2.0) - 1.0;
  for (int n : {1, 2, 50, 999}) {
    const auto c = correlation(kr, chi, chi, BigInt(n));
    CHECK(std::abs(std::abs(c) - 1.0) < 1e-9);
    CHECK(std::abs(c - std::polar(1.0, kTwoPi * n * alpha)) < kTwoPi / G);
  }

  const auto skew = TorusSystem::preset("skew_quadratic", "sqrt2");
  const auto fy = GridFunction::character(2, G, 1);
  CHECK(std::abs(correlation(skew, fy, fy, BigInt(0)) - 1.0) < 1e-12);
  double worst = 0.0;
  for (int n = 1; n <= 200; ++n) worst = std::max(worst, std::abs(correlation(skew, fy, fy, BigInt(n))));
  CHECK(worst < 1e-9);

  const auto c = GridFunction::constant(2, 32, Complex(0.25, -2.0));
  const auto one = GridFunction::constant(2, 32, 1.0);
  for (int n : {0, 3, 17}) CHECK(std::abs(correlation(skew, c, one, BigInt(n)) - Complex(0.25, -2.0)) < 1e-14);
}

TEST_CASE("correlation at zero and Hermitian symmetry") {
  const auto skew = TorusSystem::preset("skew_quadratic", "golden");
  const auto f = random_real(2, 97, 1);
  const auto g = random_real(2, 97, 2);
  Complex direct = 0.0;
  for (std::int64_t i = 0; i < f.size(); ++i) direct += f[i] * std::conj(g[i]);
  CHECK(std::abs(correlation(skew, f, g, BigInt(0)) - direct / static_cast<double>(f.size())) < 1e-12);

  const auto s = spectral_series(skew, f, f, 40);
  for (std::int64_t n = 1; n <= 40; ++n) CHECK(std::abs(s.at(-n) - std::conj(s.at(n))) < 1e-12);
  CHECK(s.n_max() == 40);
  CHECK_THROWS_AS(s.at(41), Error);

  const auto one = GridFunction::constant(2, 97, 1.0);
  const auto ones = spectral_series(skew, one, one, 10);
  for (const auto& [n, v] : ones.coeffs) CHECK(std::abs(v - 1.0) < 1e-14);

  const auto kr = TorusSystem::preset("kronecker1d", "sqrt2");
  const auto chi = GridFunction::character(1, 4096, 0);
  const std::vector<std::int64_t> idx{5, 9};
  const auto atoms = spectral_series_at(kr, chi, chi, idx);
  CHECK(atoms.has(9));
  CHECK_FALSE(atoms.has(0));
  CHECK(std::abs(atoms.at(9) - std::polar(1.0, kTwoPi * 9 * (std::sqrt(2.0) - 1.0))) < 1e-3);
}

TEST_CASE("Wiener exceedance") {
  SpectralSeries flat, atom;
  for (std::int64_t n = -100; n <= 100; ++n) {
    flat.coeffs[n] = n == 0 ? 1.0 : 0.0;
    atom.coeffs[n] = std::polar(1.0, 0.3 * static_cast<double>(n));
  }
  const SequenceFamily squares(FamilyKind::squares);
  CHECK(wiener_exceedance(flat, 0.05, squares, 10) == Rational{0, 1});
  CHECK(wiener_exceedance(atom, 0.5, squares, 10) == Rational{1, 1});
  CHECK_THROWS_AS(wiener_exceedance(atom, 0.5, squares, 11), Error);
}

TEST_CASE("offset generators") {
  auto take = [](OffsetGenerator g, int count) {
    std::vector<long> out;
    for (int i = 0; i < count; ++i) {
      auto v = g.next();
      if (!v) break;
      out.push_back(v->get_si());
    }
    return out;
  };
  CHECK(take(OffsetGenerator::parse("powers:2"), 5) == std::vector<long>{1, 2, 4, 8, 16});
  CHECK(take(OffsetGenerator::parse("squares"), 4) == std::vector<long>{1, 4, 9, 16});
  CHECK(take(OffsetGenerator::parse("primes"), 5) == std::vector<long>{2, 3, 5, 7, 11});
  CHECK(take(OffsetGenerator::parse("naturals"), 3) == std::vector<long>{1, 2, 3});
  CHECK(take(OffsetGenerator::parse("list:1,5,9"), 10) == std::vector<long>{1, 5, 9});
  CHECK_THROWS_AS(OffsetGenerator::parse("cubes"), Error);
}

TEST_CASE("Cesàro selection") {
  const auto skew = TorusSystem::preset("skew_quadratic", "sqrt2", 1024);
  const auto zero = GridFunction::constant(2, 64, 0.0);
  const auto z = cesaro_select(skew, zero, OffsetGenerator::powers(2), 0.05, 10);
  CHECK(z.reached);
  CHECK(z.selected.size() == 1);
  CHECK(z.final_norm == 0.0);

  const auto fy = GridFunction::character(2, 257, 1);
  const auto r = cesaro_select(skew, fy, OffsetGenerator::powers(2), 0.2, 500);
  CHECK(r.reached);
  CHECK_FALSE(r.error.has_value());
  CHECK(r.final_norm < 0.2);
  for (std::size_t i = 1; i < r.norms.size(); ++i) REQUIRE(r.norms[i] <= 1.05 * r.norms[i - 1]);
  // Recompute the norm of the selected average from scratch.
  CHECK(averaged_observable(skew, fy, r.selected).norm() == doctest::Approx(r.final_norm).epsilon(1e-9));

  const auto one = GridFunction::constant(2, 64, 1.0);
  const auto ctl = cesaro_select(skew, one, OffsetGenerator::powers(2), 0.5, 20);
  CHECK_FALSE(ctl.reached);
  REQUIRE(ctl.error.has_value());
  CHECK(*ctl.error == Errc::tolerance_not_reached);

  // 192 bits cannot represent 2^128 · α, so the run stops on the budget.
  const auto low = TorusSystem::preset("skew_quadratic", "sqrt2");
  const auto b = cesaro_select(low, fy, OffsetGenerator::powers(2), 1e-6, 100000);
  CHECK(b.stop_reason == "precision budget exhausted");
  CHECK(b.error == Errc::tolerance_not_reached);
}

TEST_CASE("averaged observables") {
  const auto kr = TorusSystem::preset("kronecker1d", "sqrt2");
  const auto half = GridFunction::indicator_box(1000, {{0.0, 0.5}});
  const std::vector<BigInt> a0{BigInt(0)};
  const auto same = averaged_observable(kr, half, a0);
  for (std::int64_t i = 0; i < half.size(); ++i) REQUIRE(same[i] == half[i]);

  const std::vector<BigInt> two{BigInt(0), BigInt(3)};
  const auto avg = averaged_observable(kr, half, two);
  for (const auto& v : avg.values()) REQUIRE((v.real() == 0.0 || v.real() == 0.5 || v.real() == 1.0));
  CHECK(avg.mean() == half.mean());

  const auto skew = TorusSystem::preset("skew_quadratic", "sqrt3");
  const auto f = random_real(2, 128, 9);
  const std::vector<BigInt> many{BigInt(1), BigInt(5), BigInt(-40), BigInt("1000000000000")};
  CHECK(std::abs(averaged_observable(skew, f, many).mean() - f.mean()) < 1e-12);
}

TEST_CASE("multiple correlations") {
  const auto kr = TorusSystem::preset("kronecker1d", "sqrt2");
  const auto ind = GridFunction::indicator_box(4096, {{0.0, 0.3}});
  CHECK(multi_correlation(kr, ind, PolyVec::parse("n, 2n"), 0) == doctest::Approx(ind.mean().real()));
  const auto one = GridFunction::constant(1, 4096, 1.0);
  for (int n : {0, 1, 77}) CHECK(multi_correlation(kr, one, PolyVec::parse("n, 2n"), n) == doctest::Approx(1.0));

  const double alpha = std::sqrt(2.0) - 1.0;
  int checked = 0;
  for (int n = 1; n <= 100000; ++n) {
    const double x = std::fmod(n * alpha, 1.0);
    if (x >= 1e-3) continue;
    ++checked;
    CHECK(multi_correlation(kr, ind, PolyVec::parse("n, 2n"), n) >= 0.3 - 0.01);
  }
  CHECK(checked > 0);

  const auto skew = TorusSystem::preset("skew_quadratic", "sqrt2");
  const auto f = random_real(2, 64, 4);
  for (int n = 1; n < 30; ++n) {
    const double v = multi_correlation(skew, f, PolyVec::parse("n, n^2"), n);
    REQUIRE((v >= 0.0 && v <= 1.0));
  }
}

TEST_CASE("weak mixing statistic") {
  const auto kr = TorusSystem::preset("kronecker1d", "sqrt2");
  const auto c = GridFunction::constant(1, 512, 0.4);
  CHECK(weak_mixing_statistic(kr, c, PolyVec::parse("n, 2n"), 0.01, {1, 200}) == Rational{0, 1});
  const auto half = GridFunction::indicator_box(4096, {{0.0, 0.5}});
  CHECK(weak_mixing_statistic(kr, half, PolyVec::parse("n, 2n"), 0.01, {1, 2001}).value() > 0.5);

  const auto skew = TorusSystem::preset("skew_quadratic", "sqrt2");
  const auto fy = GridFunction::character(2, 1019, 1).mapped([](Complex z) { return Complex((z.real() + 1.0) / 2.0); });
  CHECK(weak_mixing_statistic(skew, fy, PolyVec::parse("n"), 0.05, {1, 201}) == Rational{0, 1});
}

TEST_CASE("grid functions") {
  const auto f = GridFunction::from_fn(2, 8, [](std::span<const double> x) { return Complex(x[0] + 10 * x[1]); });
  const auto fm = f.fiber_mean();
  CHECK(fm[0].real() == doctest::Approx(1.0 / 16 + 5.0));
  CHECK((f - fm).mean().real() == doctest::Approx(0.0).scale(1.0));
  CHECK(GridFunction::character(1, 16, 0).norm() == doctest::Approx(1.0));
  CHECK_THROWS_AS(GridFunction(1, 4, {1.0, 2.0, NAN, 0.0}), Error);

  const std::string path = "test_dynamics_grid.bin";
  {
    std::ofstream out(path, std::ios::binary);
    for (std::int64_t i = 0; i < f.size(); ++i) {
      const double parts[2] = {f[i].real(), f[i].imag()};
      out.write(reinterpret_cast<const char*>(parts), sizeof parts);
    }
  }
  const auto back = GridFunction::read_binary(path, 2, 8);
  for (std::int64_t i = 0; i < f.size(); ++i) REQUIRE(back[i] == f[i]);
  CHECK_THROWS_AS(GridFunction::read_binary(path, 2, 9), Error);
  std::remove(path.c_str());
}
