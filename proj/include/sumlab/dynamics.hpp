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
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sumlab/common.hpp"
#include "sumlab/fixed_point.hpp"
#include "sumlab/progressions.hpp"
#include "sumlab/sequences.hpp"

namespace sumlab {

using Complex = std::complex<double>;

/// A rotation x ↦ x + α on T^d, or an affine skew product on T^b × T
///   T(x, y) = (x + α, y + L·x + β),  L ∈ Z^b,
/// whose iterates have the closed form
///   T^n(x, y) = (x + nα, y + n L·x + n(n-1)/2 · L·α + nβ).
class TorusSystem {
 public:
  enum class Kind { kronecker, skew };

  static TorusSystem kronecker(std::vector<FixedPointReal> alphas);
  static TorusSystem skew(std::vector<FixedPointReal> alphas, std::vector<std::int64_t> L, FixedPointReal beta);
  /// "kronecker1d" (x ↦ x + α) or "skew_quadratic" ((x, y) ↦ (x + α, y + 2x + α)).
  static TorusSystem preset(std::string_view name, std::string_view alpha, int frac_bits = FixedPointReal::kMinBits);

  Kind kind() const { return kind_; }
  int dim() const { return static_cast<int>(alphas_.size()) + (kind_ == Kind::skew ? 1 : 0); }
  std::span<const FixedPointReal> alphas() const { return alphas_; }
  std::span<const std::int64_t> skew_coeffs() const { return L_; }
  const FixedPointReal& beta() const { return beta_; }
  int frac_bits() const { return alphas_.front().frac_bits(); }
  /// Same system with every parameter re-rendered at frac_bits.
  TorusSystem at_precision(int frac_bits) const;
  std::string describe() const;

 private:
  Kind kind_ = Kind::kronecker;
  std::vector<FixedPointReal> alphas_;
  std::vector<std::int64_t> L_;
  FixedPointReal beta_;
};

/// T^n(x0) in closed form; negative n is allowed. Throws PrecisionBudgetExceeded.
std::vector<FixedPointReal> iterate(const TorusSystem& sys, const std::vector<FixedPointReal>& x0, const BigInt& n);

/// Samples of a function on the G^d grid of cell centers (2c+1)/(2G), row-major
/// with the last axis fastest. Integrals use the uniform weight 1/G^d.
class GridFunction {
 public:
  GridFunction(int d, std::int64_t G, std::vector<Complex> values);
  static GridFunction from_fn(int d, std::int64_t G, const std::function<Complex(std::span<const double>)>& fn);
  static GridFunction constant(int d, std::int64_t G, Complex c);
  /// e^{2πi x_axis}.
  static GridFunction character(int d, std::int64_t G, int axis);
  /// 1 on the box of half-open intervals [lo_i, hi_i) mod 1 (sampled at centers).
  static GridFunction indicator_box(std::int64_t G, const std::vector<std::pair<double, double>>& intervals);
  /// G^d little-endian (re, im) double pairs.
  static GridFunction read_binary(const std::string& path, int d, std::int64_t G);

  int dim() const { return d_; }
  std::int64_t G() const { return G_; }
  std::int64_t size() const { return static_cast<std::int64_t>(values_.size()); }
  std::span<const Complex> values() const { return values_; }
  Complex operator[](std::int64_t i) const { return values_[static_cast<std::size_t>(i)]; }

  Complex mean() const;
  /// sqrt(∫ |f|^2).
  double norm() const;
  /// Average over the last axis, broadcast back along it (projection onto the base).
  GridFunction fiber_mean() const;
  GridFunction mapped(const std::function<Complex(Complex)>& fn) const;
  GridFunction operator-(const GridFunction& other) const;
  bool same_grid(const GridFunction& other) const { return d_ == other.d_ && G_ == other.G_; }

 private:
  int d_;
  std::int64_t G_;
  std::vector<Complex> values_;
};

/// Exact action of T^n on grid cells: the image of the center of a cell in
/// row r lies in row row_src[r], shifted along the last axis by col_shift[r].
/// Every cell is hit once, so the transport preserves integrals exactly. The
/// transport for -n is the inverse permutation of the one for n.
struct GridTransport {
  std::int64_t G = 0;
  std::vector<std::int64_t> row_src;
  std::vector<std::int64_t> col_shift;
};
GridTransport grid_transport(const TorusSystem& sys, const BigInt& n, std::int64_t G);

/// z ↦ f(T^n z).
GridFunction pullback(const TorusSystem& sys, const GridFunction& f, const BigInt& n);

/// ∫ f∘T^n · conj(g) dμ.
Complex correlation(const TorusSystem& sys, const GridFunction& f, const GridFunction& g, const BigInt& n);

struct SpectralSeries {
  std::map<std::int64_t, Complex> coeffs;  // n ↦ σ̂(n)

  bool has(std::int64_t n) const { return coeffs.count(n) != 0; }
  Complex at(std::int64_t n) const;
  std::int64_t n_max() const;
};

/// σ̂(n) = correlation(sys, f, g, n) for |n| ≤ N_max.
SpectralSeries spectral_series(const TorusSystem& sys, const GridFunction& f, const GridFunction& g, std::int64_t N_max);
/// Only the listed indices.
SpectralSeries spectral_series_at(const TorusSystem& sys, const GridFunction& f, const GridFunction& g,
                                  std::span<const std::int64_t> indices);

/// |{n ∈ S_j : |σ̂(n)| > eps}| / |S_j|; throws IndexOutOfRange when some n ∈ S_j is missing.
Rational wiener_exceedance(const SpectralSeries& series, double eps, const SequenceFamily& family, std::int64_t j);
Rational wiener_exceedance(const SpectralSeries& series, double eps, std::span<const std::int64_t> sj);

/// Increasing candidates a_1 < a_2 < ... drawn from a named infinite set.
class OffsetGenerator {
 public:
  enum class Kind { powers, squares, naturals, primes, explicit_list };

  static OffsetGenerator powers(std::int64_t base);
  static OffsetGenerator squares();
  static OffsetGenerator naturals();
  static OffsetGenerator primes();
  static OffsetGenerator explicit_list(std::vector<BigInt> values);
  /// "powers:2", "squares", "naturals", "primes" or "list:1,5,9".
  static OffsetGenerator parse(std::string_view spec);

  std::optional<BigInt> next();
  std::string describe() const;

 private:
  Kind kind_ = Kind::naturals;
  std::int64_t base_ = 2;
  BigInt current_ = 0;
  std::int64_t index_ = 0;
  std::vector<BigInt> list_;
};

/// Greedy Cesàro flattening. A candidate a is accepted when the running
/// average norm ‖(1/N) Σ f∘T^{-a_i}‖ does not grow by more than the factor slack.
/// Stops once the norm falls below tol (reached), or when N_cap elements are
/// selected, max_candidates are examined, the generator runs dry or the
/// precision budget is exhausted; in those cases the best prefix is returned
/// with error = ToleranceNotReached.
struct CesaroResult {
  std::vector<BigInt> selected;
  std::vector<double> norms;  // norm after each accepted element
  double final_norm = 0.0;
  bool reached = false;
  std::optional<Errc> error;
  std::int64_t candidates_examined = 0;
  std::string stop_reason;
};
CesaroResult cesaro_select(const TorusSystem& sys, const GridFunction& f, OffsetGenerator gen, double tol,
                           std::int64_t N_cap, double slack = 1.05, std::int64_t max_candidates = 100000);

/// (1/|A'|) Σ_{a∈A'} f∘T^{-a}.
GridFunction averaged_observable(const TorusSystem& sys, const GridFunction& f, std::span<const BigInt> a_prime);

/// Re ∫ f · f∘T^{p_1(n)} ⋯ f∘T^{p_{k-1}(n)} dμ.
double multi_correlation(const TorusSystem& sys, const GridFunction& f, const PolyVec& pvec, std::int64_t n);

/// Fraction of n in n_range with |I_p(f; n) - (∫f)^k| > eps.
Rational weak_mixing_statistic(const TorusSystem& sys, const GridFunction& f, const PolyVec& pvec, double eps,
                               Window n_range);

}  // namespace sumlab
