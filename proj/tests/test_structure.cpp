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

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sumlab/recipes.hpp"
#include "sumlab/structure.hpp"

using namespace sumlab;
using Elems = std::vector<std::int64_t>;

namespace {

// First length-L interval whose every length-g subinterval meets S, by direct recount.
std::optional<Window> naive_syndetic_witness(const WindowSet& s, std::int64_t g, std::int64_t L) {
  const Window v = s.valid();
  std::vector<std::int64_t> prefix{0};
  for (std::int64_t x = v.lo; x < v.hi; ++x) prefix.push_back(prefix.back() + s.contains(x));
  auto hits = [&](std::int64_t a, std::int64_t len) { return prefix[a - v.lo + len] - prefix[a - v.lo]; };
  for (std::int64_t start = v.lo; start + L <= v.hi; ++start) {
    bool ok = true;
    for (std::int64_t t = start; ok && t + g <= start + L; ++t) ok = hits(t, g) > 0;
    if (ok) return Window{start, start + L};
  }
  return std::nullopt;
}

// {n(√2-1)} in long double; only trusted away from the box edges.
long double frac_ld(long double x) { return x - std::floor(x); }

BohrSpec unit_bohr(const char* alpha, const char* lo, const char* hi) {
  return {{FixedPointReal::parse(alpha)}, {CircleInterval::parse(lo, hi)}};
}

}  // namespace

TEST_CASE("gap profiles") {
  const auto s3 = periodic_set({0, 300}, 3, {0});
  const auto g = gap_profile(s3);
  CHECK(g.max_gap == 3);
  CHECK(g.longest_run_present == 1);
  CHECK(g.longest_run_absent == 2);

  const auto empty = WindowSet::from_elements({}, {0, 100});
  const auto ge = gap_profile(empty);
  CHECK(ge.max_gap == 100);
  CHECK(ge.longest_run_absent == 100);

  const auto mixed = WindowSet::from_predicate({0, 200}, [](std::int64_t n) { return (n >= 50 && n < 80) || n % 5 == 0; });
  // 80 is itself a multiple of 5, so the run is [50, 81).
  CHECK(gap_profile(mixed).longest_run_present == 31);
  const auto shifted = WindowSet::from_predicate({0, 200}, [](std::int64_t n) { return (n >= 52 && n < 82) || n % 5 == 0; });
  CHECK(gap_profile(shifted).longest_run_present == 30);

  const auto r = bernoulli_set({0, 5000}, 0.3, 2);
  const auto a = gap_profile(r), b = gap_profile(shift(r, 777));
  CHECK(a.max_gap == b.max_gap);
  CHECK(a.longest_run_absent == b.longest_run_absent);
  CHECK(a.longest_run_present == b.longest_run_present);
}

TEST_CASE("piecewise syndetic evidence") {
  const auto s3 = periodic_set({0, 3000}, 3, {0});
  CHECK(is_piecewise_syndetic_evidence(s3, 3, 500).found);
  const auto s2 = periodic_set({0, 3000}, 2, {0});
  CHECK_FALSE(is_piecewise_syndetic_evidence(s2, 1, 10).found);
  CHECK_THROWS_AS(is_piecewise_syndetic_evidence(s2, 5, 3001), Error);

  const auto dense = bernoulli_set({0, 100000}, 0.5, 1);
  const auto ev = is_piecewise_syndetic_evidence(dense, 20, 1000);
  CHECK(ev.found);
  CHECK(ev.witness == naive_syndetic_witness(dense, 20, 1000));

  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto sparse = bernoulli_set({-300, 6000}, 0.08, seed);
    const auto got = is_piecewise_syndetic_evidence(sparse, 40, 400);
    const auto want = naive_syndetic_witness(sparse, 40, 400);
    CHECK(got.found == want.has_value());
    CHECK(got.witness == want);
  }
}

TEST_CASE("Bohr membership of small n") {
  const auto spec = unit_bohr("sqrt2", "-0.05", "0.05");
  const auto m = bohr_members(spec, {0, 13});
  CHECK(m.contains(0));
  CHECK(m.contains(12));
  CHECK_FALSE(m.contains(1));
  CHECK(m.elements() == Elems{0, 12});
}

TEST_CASE("Bohr sets against long double rotation") {
  const auto spec = unit_bohr("sqrt2", "0.1", "0.35");
  const auto m = bohr_members(spec, {-20000, 20000});
  const long double a = std::sqrt(2.0L) - 1.0L;
  for (std::int64_t n = -20000; n < 20000; ++n) {
    const long double x = frac_ld(static_cast<long double>(n) * a);
    if (std::abs(x - 0.1L) < 1e-9L || std::abs(x - 0.35L) < 1e-9L) continue;
    REQUIRE(m.contains(n) == (x > 0.1L && x < 0.35L));
  }
}

TEST_CASE("Bohr gaps over a long range stay bounded") {
  const auto m = bohr_members(unit_bohr("sqrt2", "-0.05", "0.05"), {1, 1000001});
  const auto g = gap_profile(m);
  // Regression bound with C = 3; the return times of this rotation to the box have gaps 5, 12 and 17.
  CHECK(g.max_gap <= static_cast<std::int64_t>(std::ceil(3.0 / 0.1)));
}

TEST_CASE("Nil-Bohr sets") {
  const auto base = unit_bohr("sqrt2", "-0.05", "0.05");
  NilBohrSpec lin{base, {Polynomial::parse("n")}};
  CHECK(nil_bohr_members(lin, {-500, 5000}) == bohr_members(base, {-500, 5000}));

  NilBohrSpec quad{base, {Polynomial::parse("n^2")}};
  const auto q = nil_bohr_members(quad, {1, 1000001});
  CHECK(std::abs(static_cast<double>(q.count()) / 1e6 - 0.1) < 0.02);

  NilBohrSpec both{base, {Polynomial::parse("n"), Polynomial::parse("n^2")}};
  const auto b = nil_bohr_members(both, {1, 1000001});
  const auto l = bohr_members(base, {1, 1000001});
  for (auto n : b.elements()) REQUIRE((q.contains(n) && l.contains(n)));
  const auto qe = q.elements();
  CHECK(b.count() == static_cast<std::uint64_t>(std::count_if(qe.begin(), qe.end(), [&](auto n) { return l.contains(n); })));

  NilBohrSpec bad{base, {Polynomial::parse("n^2 + 1")}};
  CHECK_THROWS_AS(nil_bohr_members(bad, {0, 10}), Error);
}

TEST_CASE("Bohr precision budget") {
  const auto spec = unit_bohr("sqrt2", "-0.05", "0.05");
  // Any 64-bit n fits the 128-bit multiplier budget of 192 fractional bits.
  CHECK_NOTHROW(bohr_members(spec, {std::int64_t{1} << 62, (std::int64_t{1} << 62) + 10}));
  NilBohrSpec cube{spec, {Polynomial::parse("n^3")}};
  try {
    nil_bohr_members(cube, {(std::int64_t{1} << 44), (std::int64_t{1} << 44) + 4});
    FAIL("expected PrecisionBudgetExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::precision_budget_exceeded);
  }
}

TEST_CASE("torus grid sets") {
  const auto full = TorusGridSet::full(2, 64);
  CHECK(full.count() == 64 * 64);
  CHECK(full.measure() == Rational{1, 1});

  const auto box = TorusGridSet::box(100, {{0.9, 0.1}, {0.0, 0.3}});
  CHECK(box.measure() == Rational{20 * 30, 100 * 100});
  CHECK(box.contains({95, 0}));
  CHECK_FALSE(box.contains({50, 0}));
  CHECK(box.min_feature() == doctest::Approx(0.2));

  // Per-cell recount of |D ∩ (D - v_1) ∩ (D - v_2)|.
  const auto d = TorusGridSet::box(70, {{0.2, 0.65}, {0.8, 0.35}});
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<std::int64_t> sh(0, 69);
  for (int rep = 0; rep < 20; ++rep) {
    const std::vector<std::vector<std::int64_t>> v{{sh(rng), sh(rng)}, {sh(rng), sh(rng)}};
    std::uint64_t want = 0;
    for (std::int64_t x = 0; x < 70; ++x) {
      for (std::int64_t y = 0; y < 70; ++y) {
        bool in = d.contains({x, y});
        for (const auto& s : v) in = in && d.contains({(x + s[0]) % 70, (y + s[1]) % 70});
        want += in;
      }
    }
    REQUIRE(d.intersection_count(v) == want);
  }
}

TEST_CASE("torus recurrence scans") {
  const std::vector<FixedPointReal> a1{FixedPointReal::parse("sqrt2")};
  const auto full = TorusGridSet::full(1, 4096);
  const auto all = torus_recurrence_scan(full, a1, PolyVec::parse("n^2"), 0.01, {1, 500});
  CHECK(all.passing.size() == 499);

  const auto d = TorusGridSet::box(4096, {{0.0, 0.3}});
  const auto at0 = torus_recurrence_scan(d, a1, PolyVec::parse("n"), 0.05, {0, 1});
  CHECK(at0.entries[0].density == d.measure());
  CHECK(at0.passing == Elems{0});

  const auto r = torus_recurrence_scan(d, a1, PolyVec::parse("n"), 0.05, {1, 10001});
  CHECK_FALSE(r.passing.empty());
  CHECK(r.relative_frequency.num > 0);
  const long double a = std::sqrt(2.0L) - 1.0L;
  for (auto n : r.passing) {
    const long double x = frac_ld(static_cast<long double>(n) * a);
    REQUIRE(std::min(x, 1.0L - x) < 0.05L + 1.0L / 4096);
  }

  CHECK_THROWS_AS(torus_recurrence_scan(TorusGridSet::box(16, {{0.0, 0.3}}), a1, PolyVec::parse("n"), 0.05, {1, 10}),
                  Error);
}
