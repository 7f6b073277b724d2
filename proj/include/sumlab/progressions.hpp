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

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sumlab/common.hpp"
#include "sumlab/windowset.hpp"

namespace sumlab {

/// Integer polynomial c[0] + c[1] n + c[2] n^2 + ...
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<std::int64_t> coeffs);
  /// Accepts sums of terms like "n", "2n", "-3*n^2", "7".
  static Polynomial parse(std::string_view text);
  static Polynomial monomial(std::int64_t coeff, int degree);

  std::span<const std::int64_t> coeffs() const { return coeffs_; }
  int degree() const { return coeffs_.empty() ? 0 : static_cast<int>(coeffs_.size()) - 1; }
  std::int64_t constant_term() const { return coeffs_.empty() ? 0 : coeffs_[0]; }

  /// Throws Overflow when any intermediate leaves the 64-bit range.
  std::int64_t operator()(std::int64_t n) const;
  BigInt eval_big(const BigInt& n) const;
  std::string to_string() const;

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  std::vector<std::int64_t> coeffs_;  // no trailing zeros
};

/// p_1, ..., p_{k-1}; the pattern at n is {0, p_1(n), ..., p_{k-1}(n)}.
class PolyVec {
 public:
  PolyVec() = default;
  explicit PolyVec(std::vector<Polynomial> polys) : polys_(std::move(polys)) {}
  /// (n, 2n, ..., (k-1)n).
  static PolyVec arithmetic(int k);
  /// Comma separated polynomials, e.g. "n, 2n" or "n^2".
  static PolyVec parse(std::string_view text);

  std::span<const Polynomial> polys() const { return polys_; }
  int k() const { return static_cast<int>(polys_.size()) + 1; }
  int degree() const;
  /// {0, p_1(n), ..., p_{k-1}(n)}; throws Overflow.
  std::vector<std::int64_t> offsets(std::int64_t n) const;
  std::string to_string() const;

 private:
  std::vector<Polynomial> polys_;
};

/// d*-estimate of E ∩ (E-n) ∩ ... ∩ (E-(k-1)n) at window length M+1.
Rational ap_correlation_density(const WindowSet& e, int k, std::int64_t n, std::int64_t M);
/// Same for an arbitrary offset pattern; 0 is always included.
Rational pattern_correlation_density(const WindowSet& e, std::span<const std::int64_t> offsets, std::int64_t M);

enum class ScanFlag { ok, empty_valid_region, out_of_range };
std::string_view scan_flag_name(ScanFlag f);
ScanFlag parse_scan_flag(std::string_view name);

struct ScanEntry {
  std::int64_t n = 0;
  Rational density;
  ScanFlag flag = ScanFlag::ok;
};

/// Outcome of a threshold scan. Entries whose pattern leaves the data
/// (OUT_OF_RANGE) are excluded from the statistics; EMPTY_VALID_REGION entries
/// count as density 0. max_gap is the largest difference between consecutive
/// passing n, or n_range.length() when fewer than two n pass.
struct ScanReport {
  double threshold = 0.0;
  bool strict = false;  // pass on density > threshold instead of >=
  Window n_range;  // half-open
  std::int64_t M = 0;
  std::vector<ScanEntry> entries;  // every n in n_range admitted by the filter, increasing
  std::vector<std::int64_t> passing;
  std::int64_t max_gap = 0;
  Rational relative_frequency;  // |passing| / |entries that are not OUT_OF_RANGE|
};

using NFilter = std::function<bool(std::int64_t)>;

ScanReport scan_good_n(const WindowSet& e, const PolyVec& pvec, double threshold, Window n_range, std::int64_t M,
                       const NFilter& filter = {});

/// Fills passing, max_gap and relative_frequency from entries and threshold.
void summarize(ScanReport& report);

nlohmann::json to_json(const ScanReport& r);
ScanReport scan_report_from_json(const nlohmann::json& j);
/// Two columns: n,density.
void write_csv(std::ostream& out, const ScanReport& r);

}  // namespace sumlab
