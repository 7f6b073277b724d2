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
#include <optional>
#include <vector>

#include <json.hpp>

#include "sumlab/fixed_point.hpp"
#include "sumlab/progressions.hpp"
#include "sumlab/windowset.hpp"

namespace sumlab {

/// Gap statistics over S.valid. max_gap is the largest difference between
/// consecutive members; with fewer than two members it is valid.length().
struct GapProfile {
  std::int64_t max_gap = 0;
  std::int64_t longest_run_absent = 0;
  std::int64_t longest_run_present = 0;
  Window window;
};

GapProfile gap_profile(const WindowSet& s);
nlohmann::json to_json(const GapProfile& g);

/// Some length-L interval I ⊆ S.valid in which every length-g subinterval of I
/// meets S (no absent run of length g inside I). witness is the first such I.
struct SyndeticEvidence {
  bool found = false;
  std::optional<Window> witness;
};
SyndeticEvidence is_piecewise_syndetic_evidence(const WindowSet& s, std::int64_t g, std::int64_t L);

/// {n : nα_i mod 1 ∈ box_i for every coordinate i}.
struct BohrSpec {
  std::vector<FixedPointReal> alphas;
  std::vector<CircleInterval> box;

  std::size_t dim() const { return alphas.size(); }
  void validate() const;
};

/// ∩_p {n : p(n)α ∈ box}; each p must satisfy p(0) = 0.
struct NilBohrSpec {
  BohrSpec base;
  std::vector<Polynomial> polys;

  void validate() const;
};

/// Throws PrecisionBudgetExceeded when |n| exceeds the budget of some α.
WindowSet bohr_members(const BohrSpec& spec, Window n_range);
WindowSet nil_bohr_members(const NilBohrSpec& spec, Window n_range);

/// Indicator on the uniform grid of G^d cells of T^d. Cell c = (c_1, ..., c_d)
/// stands for the point with coordinates (2c_i + 1) / (2G). Rows run along the
/// last axis and are packed LSB-first.
class TorusGridSet {
 public:
  /// Axis-aligned box of half-open intervals [lo_i, hi_i) mod 1 (lo > hi wraps).
  static TorusGridSet box(std::int64_t G, const std::vector<std::pair<double, double>>& intervals);
  static TorusGridSet full(int d, std::int64_t G);

  int dim() const { return d_; }
  std::int64_t G() const { return G_; }
  std::int64_t cells() const;
  std::uint64_t count() const;
  Rational measure() const { return {static_cast<std::int64_t>(count()), cells()}; }
  /// Smallest box side length (1 for the full torus).
  double min_feature() const { return min_feature_; }
  bool contains(const std::vector<std::int64_t>& cell) const;

  /// |D ∩ (D - v_1) ∩ ... | in cells, where each v_j is given by its per-axis
  /// shift in whole cells.
  std::uint64_t intersection_count(const std::vector<std::vector<std::int64_t>>& shifts) const;

 private:
  TorusGridSet(int d, std::int64_t G);
  std::int64_t words_per_row() const { return (G_ + 63) / 64; }
  std::int64_t rows() const { return cells() / G_; }
  std::uint64_t* row(std::int64_t r) { return bits_.data() + r * words_per_row(); }
  const std::uint64_t* row(std::int64_t r) const { return bits_.data() + r * words_per_row(); }

  int d_ = 1;
  std::int64_t G_ = 1;
  double min_feature_ = 1.0;
  std::vector<std::uint64_t> bits_;
};

/// Per-n grid measure of D ∩ (D - p_1(n)α) ∩ ... ∩ (D - p_{k-1}(n)α); n passes
/// when the measure exceeds measure(D) - eps. Shifts are rounded to the
/// nearest cell. Throws ResolutionTooCoarse when eps or a box side is not
/// resolved by the grid (eps·G ≤ 1 or side·G < 1).
ScanReport torus_recurrence_scan(const TorusGridSet& D, const std::vector<FixedPointReal>& alphas,
                                 const PolyVec& polys, double eps, Window n_range, const NFilter& filter = {});

}  // namespace sumlab
