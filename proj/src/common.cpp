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

#include "sumlab/common.hpp"

#include <limits>

namespace sumlab {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::empty_valid_region: return "EmptyValidRegion";
    case Errc::window_too_small: return "WindowTooSmall";
    case Errc::index_out_of_range: return "IndexOutOfRange";
    case Errc::overflow: return "Overflow";
    case Errc::precision_budget_exceeded: return "PrecisionBudgetExceeded";
    case Errc::resolution_too_coarse: return "ResolutionTooCoarse";
    case Errc::tolerance_not_reached: return "ToleranceNotReached";
    case Errc::parse_error: return "ParseError";
    case Errc::io_error: return "IoError";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

namespace {

int compare_exact(const Rational& r, double threshold) {
  mpq_class lhs{BigInt(static_cast<long>(r.num)), BigInt(static_cast<long>(r.den))};
  lhs.canonicalize();
  const mpq_class rhs(threshold);
  return cmp(lhs, rhs);
}

}  // namespace

bool at_least(const Rational& r, double threshold) { return compare_exact(r, threshold) >= 0; }
bool greater_than(const Rational& r, double threshold) { return compare_exact(r, threshold) > 0; }

BigInt to_big(i128 v) {
  const bool neg = v < 0;
  u128 mag = neg ? static_cast<u128>(-(v + 1)) + 1 : static_cast<u128>(v);
  BigInt hi(static_cast<unsigned long>(static_cast<std::uint64_t>(mag >> 64)));
  BigInt out = hi << 64;
  out += BigInt(static_cast<unsigned long>(static_cast<std::uint64_t>(mag)));
  return neg ? BigInt(-out) : out;
}

std::int64_t to_int64(const BigInt& v) {
  if (!v.fits_slong_p()) throw Error(Errc::overflow, "integer does not fit in 64 bits");
  return v.get_si();
}

}  // namespace sumlab
