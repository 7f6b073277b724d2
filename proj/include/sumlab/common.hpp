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
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace sumlab {

using BigInt = mpz_class;
using i128 = __int128;
using u128 = unsigned __int128;

enum class Errc {
  invalid_argument,
  empty_valid_region,
  window_too_small,
  index_out_of_range,
  overflow,
  precision_budget_exceeded,
  resolution_too_coarse,
  tolerance_not_reached,
  parse_error,
  io_error,
};

std::string_view errc_name(Errc code);

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Exact nonnegative ratio; the denominator is always positive.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  friend bool operator==(const Rational& a, const Rational& b) {
    return static_cast<i128>(a.num) * b.den == static_cast<i128>(b.num) * a.den;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const i128 lhs = static_cast<i128>(a.num) * b.den;
    const i128 rhs = static_cast<i128>(b.num) * a.den;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
};

/// Compares a rational against a real threshold without rounding num/den first.
bool at_least(const Rational& r, double threshold);
bool greater_than(const Rational& r, double threshold);

BigInt to_big(i128 v);
/// Throws Errc::overflow when v does not fit.
std::int64_t to_int64(const BigInt& v);

}  // namespace sumlab
