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

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sumlab/common.hpp"

namespace sumlab {

/// A real number in [0,1) held as mantissa / 2^frac_bits.
///
/// frac_bits is a multiple of 64 and at least 192. Addition, subtraction and
/// multiplication by integers are exact modulo 1. Multiplying by an integer m
/// is only allowed while |m| < 2^(frac_bits-64), which bounds the error
/// inherited from truncating an irrational to |m| * 2^-frac_bits < 2^-64.
///
/// Values built by parse() remember their source text so they can be
/// re-rendered at a different precision.
class FixedPointReal {
 public:
  static constexpr int kMinBits = 192;

  explicit FixedPointReal(int frac_bits = kMinBits);

  /// Named constants (sqrt2, sqrt3, golden, pi_frac), reduced mod 1, or a
  /// decimal / p/q literal such as "0.05", "-0.05", "1/3".
  static FixedPointReal parse(std::string_view spec, int frac_bits = kMinBits);
  /// num / 2^log2_den mod 1.
  static FixedPointReal dyadic(std::uint64_t num, int log2_den, int frac_bits = kMinBits);
  /// k * 2^-frac_bits mod 1 (k ≥ 0).
  static FixedPointReal from_ulps(const BigInt& k, int frac_bits);
  static FixedPointReal from_mantissa(const BigInt& mantissa, int frac_bits);

  int frac_bits() const { return static_cast<int>(limbs_.size()) * 64; }
  std::span<const std::uint64_t> limbs() const { return limbs_; }
  const std::string& source() const { return source_; }
  BigInt mantissa() const;

  /// Re-rendered from source() when available, otherwise zero-extended / truncated.
  FixedPointReal at_precision(int frac_bits) const;

  bool is_zero() const;
  double to_double() const;
  std::string to_decimal(int digits) const;

  FixedPointReal operator+(const FixedPointReal& other) const;
  FixedPointReal operator-(const FixedPointReal& other) const;
  FixedPointReal negated() const;

  FixedPointReal times(int m) const { return times(static_cast<std::int64_t>(m)); }
  FixedPointReal times(std::int64_t m) const;
  FixedPointReal times(i128 m) const;
  FixedPointReal times(const BigInt& m) const;

  /// floor(G*x) together with whether the fractional remainder is at least 1/2.
  struct Scaled {
    std::uint64_t floor = 0;
    bool upper_half = false;
  };
  Scaled scaled(std::uint64_t G) const;

  friend bool operator==(const FixedPointReal& a, const FixedPointReal& b) { return a.limbs_ == b.limbs_; }
  friend std::strong_ordering operator<=>(const FixedPointReal& a, const FixedPointReal& b);

 private:
  FixedPointReal times_magnitude(const std::uint64_t* mag, std::size_t mag_limbs, bool negative) const;

  std::vector<std::uint64_t> limbs_;  // little-endian, limbs_.back() holds the most significant bits
  std::string source_;
};

/// Throws PrecisionBudgetExceeded unless bit_length(|m|) ≤ frac_bits - 64.
void check_precision_budget(const BigInt& m, int frac_bits);

/// Open interval (lo, hi) on the circle; lo > hi wraps through 0.
struct CircleInterval {
  FixedPointReal lo;
  FixedPointReal hi;

  static CircleInterval parse(std::string_view lo, std::string_view hi, int frac_bits = FixedPointReal::kMinBits);
  bool wraps() const { return hi < lo; }
  bool contains(const FixedPointReal& x) const;
  double width() const;
};

}  // namespace sumlab
