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

#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "sumlab/common.hpp"
#include "sumlab/fixed_point.hpp"
#include "sumlab/windowset.hpp"

namespace sumlab {

/// An angle stored as a fraction of a full turn, so θ = 2π·turns.
struct Angle {
  double turns = 0.0;

  static Angle from_radians(double radians);
  static Angle from_turns(double turns) { return Angle{turns}; }
  double radians() const;
};

/// e^{2πi·frac}, exact at quarter turns.
std::complex<double> unit_phase(double frac);
/// frac(n·turns) computed from the exact binary expansion of `turns`.
double frac_of_product(std::int64_t n, double turns);

enum class FamilyKind { squares, primes, blocks, floor_pow_5_2, poly_floor };

/// The index sets S_j of the sequence families used for Weyl averages and
/// relative density:
///   squares        {1, 4, ..., j²}
///   primes         {p ≤ j}
///   blocks         {2^j, ..., 2^j + j - 1}
///   floor_pow_5_2  {⌊m^{5/2}⌋ : 1 ≤ m ≤ j}
///   poly_floor     {⌊√2·m⁵ − π·m³⌋ : 1 ≤ m ≤ j}
class SequenceFamily {
 public:
  static constexpr std::int64_t kPrimeSieveLimit = 100'000'000;

  explicit SequenceFamily(FamilyKind kind) : kind_(kind) {}
  static SequenceFamily parse(std::string_view name);

  FamilyKind kind() const { return kind_; }
  std::string_view name() const;

  /// Throws Overflow when an element does not fit in 64 bits.
  std::vector<std::int64_t> generate(std::int64_t j) const;
  /// A translate of S_j. Weyl magnitudes are translation invariant, and for
  /// blocks the translate {0, ..., j-1} stays representable for every j.
  std::vector<std::int64_t> generate_translate(std::int64_t j) const;
  /// Families whose Weyl averages fail to vanish at some θ (squares, primes).
  bool has_exceptional_frequencies() const;

 private:
  FamilyKind kind_;
};

/// (1/|S|) Σ_{n∈S} e^{inθ} with compensated summation; θ must lie in (0, 2π).
std::complex<double> weyl_average(std::span<const std::int64_t> sj, Angle theta);

struct WeylProfile {
  std::int64_t j = 0;
  double tolerance = 0.0;
  std::vector<Angle> thetas;
  std::vector<double> magnitudes;
  std::vector<Angle> exceptional;  // magnitude > tolerance
};

WeylProfile equidist_profile(const SequenceFamily& family, std::int64_t j, std::span<const Angle> thetas,
                             double tolerance);

/// Rational multiples 2πa/q, q ≤ max_den, for families with exceptional frequencies.
std::vector<Angle> analytic_suspects(const SequenceFamily& family, int max_den);
/// `count` angles with turns frac((i+1)·(√5−1)/2), avoiding rational multiples of 2π.
std::vector<Angle> generic_theta_grid(int count);

void write_csv(std::ostream& out, const WeylProfile& profile);

/// {n^k·α} by exact multiplication; error ≤ n^k·2^-frac_bits.
FixedPointReal frac_part_power(std::int64_t n, int k, const FixedPointReal& alpha);

/// S_{k,α} ∩ n_range = {n : {n^k α} ∈ (1/4, 3/4)}. Values whose error interval
/// straddles an endpoint are re-tested with α at twice the precision; those
/// that still straddle are reported as BOUNDARY_AMBIGUOUS.
struct IntersectiveMembers {
  std::vector<std::int64_t> members;
  std::vector<std::int64_t> ambiguous;
};
IntersectiveMembers intersective_members(int k, const FixedPointReal& alpha, Window n_range);

}  // namespace sumlab
