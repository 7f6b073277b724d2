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
#include <random>

#include "oracles.hpp"
#include "sumlab/density.hpp"
#include "sumlab/fixed_point.hpp"
#include "sumlab/recipes.hpp"

using namespace sumlab;
using Elems = std::vector<std::int64_t>;

TEST_CASE("periodic and empty sets") {
  const auto s3 = periodic_set({0, 30000}, 3, {0});
  const auto e = banach_density(s3, 2999);
  CHECK(e.value.num == 1000);
  CHECK(e.value.den == 3000);
  CHECK(e.window_len == 2999);

  const Elems Ms{299, 2999, 29999};
  for (const auto& d : banach_density_sweep(s3, Ms)) CHECK(d.value == Rational{1, 3});

  const auto empty = WindowSet::from_elements({}, {0, 1000});
  CHECK(banach_density(empty, 99).value == Rational{0, 1});
}

TEST_CASE("density of a finite block decays with M") {
  Elems block;
  for (int i = 0; i < 10; ++i) block.push_back(i);
  const auto s = WindowSet::from_elements(block, {0, 1000000});
  const Elems Ms{9, 99, 999};
  const auto sweep = banach_density_sweep(s, Ms);
  CHECK(sweep[0].value == Rational{1, 1});
  CHECK(sweep[1].value == Rational{1, 10});
  CHECK(sweep[2].value == Rational{1, 100});
  CHECK(sweep[2].argmax_window == Window{0, 1000});
}

TEST_CASE("Bernoulli sweep approaches one half from above") {
  const auto s = bernoulli_set({0, 1000000}, 0.5, 7);
  const Elems Ms{99, 999, 9999};
  const auto sweep = banach_density_sweep(s, Ms);
  CHECK(sweep[0].value > sweep[1].value);
  CHECK(sweep[1].value > sweep[2].value);
  CHECK(std::abs(sweep[2].value.value() - 0.5) < 0.02);
}

TEST_CASE("golden rotation set has density one quarter") {
  const auto s = power_rotation_set({0, 1000000}, 1, FixedPointReal::parse("golden"), 0.0, 0.25);
  CHECK(std::abs(banach_density(s, 99999).value.value() - 0.25) < 0.01);
}

TEST_CASE("sliding count equals the naive recount") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::int64_t> lo_d(-500, 500), len_d(1, 1000);
    const std::int64_t lo = lo_d(rng);
    const Window w{lo, lo + 1500 + static_cast<std::int64_t>(seed) * 37};
    const auto s = WindowSet::from_elements(oracle::random_elements(rng, w, 0.1 + 0.07 * static_cast<double>(seed)), w);
    for (int rep = 0; rep < 4; ++rep) {
      const auto len = len_d(rng);
      const auto got = max_window_count(s, len);
      REQUIRE(static_cast<std::int64_t>(got.count) == oracle::max_window_count(s, len));
      // The reported start attains the maximum.
      REQUIRE(s.count_in({got.start, got.start + len}) == got.count);
    }
  }
}

TEST_CASE("invariants: union monotone, shift invariant, periodic exact") {
  const auto s = bernoulli_set({0, 20000}, 0.2, 4);
  const auto t = bernoulli_set({0, 20000}, 0.2, 5);
  const auto u = unite(s, t);
  for (std::int64_t M : {63, 500, 4095}) {
    CHECK(banach_density(u, M).value >= banach_density(s, M).value);
    CHECK(banach_density(shift(s, -12345), M).value == banach_density(s, M).value);
  }
  for (std::int64_t p : {2, 5, 7, 12}) {
    const auto ps = periodic_set({-1000, 9000}, p, {0, 1});
    const Rational exact{2, p};
    CHECK(banach_density(ps, 40 * p - 1).value == exact);
  }
}

TEST_CASE("window too small and out-of-range sequence elements") {
  const auto s = periodic_set({0, 100}, 3, {0});
  CHECK_THROWS_AS(banach_density(s, 100), Error);
  try {
    banach_density(s, 100);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::window_too_small);
  }
  const Elems sj{5, 500};
  try {
    relative_density(s, sj);
    FAIL("expected IndexOutOfRange");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::index_out_of_range);
  }
}

TEST_CASE("relative density along squares") {
  const SequenceFamily squares(FamilyKind::squares);
  const auto all = WindowSet::full({0, 10001});
  CHECK(relative_density(all, squares, 100) == Rational{1, 1});
  const auto evens = periodic_set({0, 10001}, 2, {0});
  CHECK(relative_density(evens, squares, 100) == Rational{1, 2});

  // {n√2} < 0.3 sampled at n = m², membership decided in long double.
  const long double root2 = std::sqrt(2.0L);
  Elems hits;
  for (std::int64_t m = 1; m <= 10000; ++m) {
    const long double x = static_cast<long double>(m * m) * root2;
    if (x - std::floor(x) < 0.3L) hits.push_back(m * m);
  }
  const auto a = WindowSet::from_elements(hits, {0, 100000001});
  const auto rd = relative_density(a, squares, 10000);
  CHECK(std::abs(rd.value() - 0.3) < 0.02);

  const auto prof = relative_density_profile(evens, squares, Elems{10, 20, 40});
  CHECK(prof.values.size() == 3);
  CHECK(prof.tail_max[0] >= prof.values[0]);
  CHECK(prof.tail_max[2] == prof.values[2]);
}
