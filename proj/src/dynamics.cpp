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

#include "sumlab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "sumlab/parallel.hpp"

namespace sumlab {

namespace {

struct Neumaier {
  double sum = 0.0, comp = 0.0;
  void add(double x) {
    const double t = sum + x;
    comp += std::fabs(sum) >= std::fabs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

std::int64_t ipow(std::int64_t G, int d) {
  std::int64_t c = 1;
  for (int i = 0; i < d; ++i) c *= G;
  return c;
}

// Cell offset of a translation by v: the center (2c+1)/(2G) + v lies in cell c + floor(Gv) + [frac(Gv) ≥ 1/2].
std::int64_t cell_shift(const FixedPointReal& v, std::int64_t G) {
  const auto s = v.scaled(static_cast<std::uint64_t>(G));
  return static_cast<std::int64_t>((s.floor + (s.upper_half ? 1 : 0)) % static_cast<std::uint64_t>(G));
}

FixedPointReal dot(std::span<const std::int64_t> L, std::span<const FixedPointReal> v) {
  FixedPointReal acc(v.front().frac_bits());
  for (std::size_t i = 0; i < L.size(); ++i) acc = acc + v[i].times(L[i]);
  return acc;
}

}  // namespace

TorusSystem TorusSystem::kronecker(std::vector<FixedPointReal> alphas) {
  if (alphas.empty()) throw Error(Errc::invalid_argument, "Kronecker system needs at least one alpha");
  TorusSystem s;
  s.kind_ = Kind::kronecker;
  s.alphas_ = std::move(alphas);
  s.beta_ = FixedPointReal(s.alphas_.front().frac_bits());
  return s;
}

TorusSystem TorusSystem::skew(std::vector<FixedPointReal> alphas, std::vector<std::int64_t> L, FixedPointReal beta) {
  if (alphas.empty() || alphas.size() != L.size()) {
    throw Error(Errc::invalid_argument, "skew system needs one coefficient per base alpha");
  }
  TorusSystem s;
  s.kind_ = Kind::skew;
  s.alphas_ = std::move(alphas);
  s.L_ = std::move(L);
  s.beta_ = std::move(beta);
  return s;
}

TorusSystem TorusSystem::preset(std::string_view name, std::string_view alpha, int frac_bits) {
  const auto a = FixedPointReal::parse(alpha, frac_bits);
  if (name == "kronecker1d") return kronecker({a});
  if (name == "skew_quadratic") return skew({a}, {2}, a);
  throw Error(Errc::parse_error, "unknown system preset '" + std::string(name) + "'");
}

TorusSystem TorusSystem::at_precision(int frac_bits) const {
  TorusSystem s = *this;
  for (auto& a : s.alphas_) a = a.at_precision(frac_bits);
  s.beta_ = beta_.at_precision(frac_bits);
  return s;
}

std::string TorusSystem::describe() const {
  std::ostringstream os;
  os << (kind_ == Kind::kronecker ? "kronecker" : "skew") << " d=" << dim() << " alpha=[";
  for (std::size_t i = 0; i < alphas_.size(); ++i) {
    os << (i ? "," : "") << (alphas_[i].source().empty() ? alphas_[i].to_decimal(20) : alphas_[i].source());
  }
  os << "]";
  if (kind_ == Kind::skew) {
    os << " L=[";
    for (std::size_t i = 0; i < L_.size(); ++i) os << (i ? "," : "") << L_[i];
    os << "] beta=" << (beta_.source().empty() ? beta_.to_decimal(20) : beta_.source());
  }
  return os.str();
}

std::vector<FixedPointReal> iterate(const TorusSystem& sys, const std::vector<FixedPointReal>& x0, const BigInt& n) {
  if (static_cast<int>(x0.size()) != sys.dim()) throw Error(Errc::invalid_argument, "point dimension mismatch");
  const auto alphas = sys.alphas();
  std::vector<FixedPointReal> out;
  for (std::size_t i = 0; i < alphas.size(); ++i) out.push_back(x0[i] + alphas[i].times(n));
  if (sys.kind() == TorusSystem::Kind::skew) {
    const auto L = sys.skew_coeffs();
    const BigInt tri = n * (n - 1) / 2;
    const FixedPointReal lx = dot(L, std::span<const FixedPointReal>(x0.data(), alphas.size()));
    out.push_back(x0.back() + lx.times(n) + dot(L, alphas).times(tri) + sys.beta().times(n));
  }
  return out;
}

GridFunction::GridFunction(int d, std::int64_t G, std::vector<Complex> values) : d_(d), G_(G), values_(std::move(values)) {
  if (d < 1 || G < 1) throw Error(Errc::invalid_argument, "grid function needs d >= 1 and G >= 1");
  if (static_cast<std::int64_t>(values_.size()) != ipow(G, d)) {
    throw Error(Errc::invalid_argument, "grid function needs G^d values");
  }
  for (const auto& v : values_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw Error(Errc::invalid_argument, "non-finite sample");
  }
}

GridFunction GridFunction::from_fn(int d, std::int64_t G, const std::function<Complex(std::span<const double>)>& fn) {
  if (d < 1 || G < 1) throw Error(Errc::invalid_argument, "grid function needs d >= 1 and G >= 1");
  std::vector<Complex> values(static_cast<std::size_t>(ipow(G, d)));
  std::vector<std::int64_t> idx(static_cast<std::size_t>(d), 0);
  std::vector<double> x(static_cast<std::size_t>(d));
  for (auto& v : values) {
    for (int a = 0; a < d; ++a) x[a] = static_cast<double>(2 * idx[a] + 1) / static_cast<double>(2 * G);
    v = fn(x);
    for (int a = d - 1; a >= 0 && ++idx[a] == G; --a) idx[a] = 0;
  }
  return GridFunction(d, G, std::move(values));
}

GridFunction GridFunction::constant(int d, std::int64_t G, Complex c) {
  return GridFunction(d, G, std::vector<Complex>(static_cast<std::size_t>(ipow(G, d)), c));
}

GridFunction GridFunction::character(int d, std::int64_t G, int axis) {
  if (axis < 0 || axis >= d) throw Error(Errc::invalid_argument, "axis out of range");
  // Cell c sits at (2c+1)/(2G); tabulate once per axis index.
  std::vector<Complex> table(static_cast<std::size_t>(G));
  for (std::int64_t c = 0; c < G; ++c) table[c] = unit_phase(static_cast<double>(2 * c + 1) / static_cast<double>(2 * G));
  std::vector<Complex> values(static_cast<std::size_t>(ipow(G, d)));
  const std::int64_t stride = ipow(G, d - 1 - axis);
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = table[(static_cast<std::int64_t>(i) / stride) % G];
  return GridFunction(d, G, std::move(values));
}

GridFunction GridFunction::indicator_box(std::int64_t G, const std::vector<std::pair<double, double>>& intervals) {
  for (const auto& [lo, hi] : intervals) {
    if (!(lo >= 0 && lo <= 1 && hi >= 0 && hi <= 1) || lo == hi) {
      throw Error(Errc::invalid_argument, "box sides must be nonempty intervals in [0,1]");
    }
  }
  return from_fn(static_cast<int>(intervals.size()), G, [&](std::span<const double> x) {
    for (std::size_t a = 0; a < intervals.size(); ++a) {
      const auto [lo, hi] = intervals[a];
      const bool in = lo < hi ? (x[a] >= lo && x[a] < hi) : (x[a] >= lo || x[a] < hi);
      if (!in) return Complex(0.0);
    }
    return Complex(1.0);
  });
}

GridFunction GridFunction::read_binary(const std::string& path, int d, std::int64_t G) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open " + path);
  std::vector<Complex> values(static_cast<std::size_t>(ipow(G, d)));
  for (auto& v : values) {
    unsigned char buf[16];
    if (!in.read(reinterpret_cast<char*>(buf), 16)) throw Error(Errc::io_error, path + " holds fewer than G^d samples");
    double parts[2];
    for (int p = 0; p < 2; ++p) {
      std::uint64_t bits = 0;
      for (int b = 7; b >= 0; --b) bits = (bits << 8) | buf[p * 8 + b];
      std::memcpy(&parts[p], &bits, sizeof bits);
    }
    v = {parts[0], parts[1]};
  }
  return GridFunction(d, G, std::move(values));
}

Complex GridFunction::mean() const {
  Neumaier re, im;
  for (const auto& v : values_) {
    re.add(v.real());
    im.add(v.imag());
  }
  const double n = static_cast<double>(values_.size());
  return {re.value() / n, im.value() / n};
}

double GridFunction::norm() const {
  Neumaier s;
  for (const auto& v : values_) s.add(std::norm(v));
  return std::sqrt(s.value() / static_cast<double>(values_.size()));
}

GridFunction GridFunction::fiber_mean() const {
  std::vector<Complex> out(values_.size());
  for (std::size_t r = 0; r < values_.size(); r += static_cast<std::size_t>(G_)) {
    Complex s = 0;
    for (std::int64_t c = 0; c < G_; ++c) s += values_[r + c];
    s /= static_cast<double>(G_);
    std::fill(out.begin() + static_cast<std::ptrdiff_t>(r), out.begin() + static_cast<std::ptrdiff_t>(r + G_), s);
  }
  return GridFunction(d_, G_, std::move(out));
}

GridFunction GridFunction::mapped(const std::function<Complex(Complex)>& fn) const {
  std::vector<Complex> out(values_.size());
  std::transform(values_.begin(), values_.end(), out.begin(), fn);
  return GridFunction(d_, G_, std::move(out));
}

GridFunction GridFunction::operator-(const GridFunction& other) const {
  if (!same_grid(other)) throw Error(Errc::invalid_argument, "grid mismatch");
  std::vector<Complex> out(values_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = values_[i] - other.values_[i];
  return GridFunction(d_, G_, std::move(out));
}

namespace {

GridTransport forward_transport(const TorusSystem& sys, const BigInt& n, std::int64_t G) {
  const int d = sys.dim();
  const auto alphas = sys.alphas();
  const std::int64_t rows = ipow(G, d - 1);
  GridTransport t;
  t.G = G;
  t.row_src.resize(static_cast<std::size_t>(rows));
  t.col_shift.resize(static_cast<std::size_t>(rows));

  // Axes 0..d-2 index rows; each shifts by a constant number of cells.
  const int row_axes = d - 1;
  std::vector<std::int64_t> s(static_cast<std::size_t>(row_axes));
  for (int a = 0; a < row_axes; ++a) s[a] = cell_shift(alphas[a].times(n), G);

  std::int64_t last_const = 0;
  bool half = false;
  std::int64_t n_mod = 0;  // n mod 2G
  if (sys.kind() == TorusSystem::Kind::kronecker) {
    last_const = cell_shift(alphas[d - 1].times(n), G);
  } else {
    // Fiber: y + nL·x + K with K = n(n-1)/2 · L·α + nβ. At base centers nL·x = nI/(2G),
    // I = Σ L_j (2c_j + 1), so the fiber center moves to (2c_y + 1 + J)/(2G) + K, J = nI mod 2G.
    const BigInt tri = n * (n - 1) / 2;
    const FixedPointReal K = dot(sys.skew_coeffs(), alphas).times(tri) + sys.beta().times(n);
    const auto sc = K.scaled(static_cast<std::uint64_t>(G));
    last_const = static_cast<std::int64_t>(sc.floor);
    half = sc.upper_half;
    BigInt r = n % (2 * G);
    if (r < 0) r += 2 * G;
    n_mod = r.get_si();
  }

  const auto L = sys.skew_coeffs();
  std::vector<std::int64_t> idx(static_cast<std::size_t>(row_axes), 0);
  for (std::int64_t r = 0; r < rows; ++r) {
    std::int64_t src = 0;
    for (int a = 0; a < row_axes; ++a) src = src * G + (idx[a] + s[a]) % G;
    t.row_src[r] = src;
    if (sys.kind() == TorusSystem::Kind::kronecker) {
      t.col_shift[r] = last_const;
    } else {
      i128 I = 0;
      for (int a = 0; a < row_axes; ++a) I += static_cast<i128>(L[a]) * (2 * idx[a] + 1);
      const i128 mod = 2 * static_cast<i128>(G);
      I %= mod;
      if (I < 0) I += mod;
      const std::int64_t J = static_cast<std::int64_t>((static_cast<i128>(n_mod) * I) % mod);
      const std::int64_t m = last_const + (1 + J) / 2 + (((1 + J) & 1) && half ? 1 : 0);
      t.col_shift[r] = m % G;
    }
    for (int a = row_axes - 1; a >= 0 && ++idx[a] == G; --a) idx[a] = 0;
  }
  return t;
}

}  // namespace

GridTransport grid_transport(const TorusSystem& sys, const BigInt& n, std::int64_t G) {
  if (sgn(n) >= 0) return forward_transport(sys, n, G);
  // Rounding the closed form for -n independently would not invert the map for
  // n, so negative powers use the inverse permutation instead.
  const GridTransport fwd = forward_transport(sys, -n, G);
  GridTransport inv;
  inv.G = G;
  inv.row_src.resize(fwd.row_src.size());
  inv.col_shift.resize(fwd.col_shift.size());
  for (std::size_t r = 0; r < fwd.row_src.size(); ++r) {
    const auto dst = static_cast<std::size_t>(fwd.row_src[r]);
    inv.row_src[dst] = static_cast<std::int64_t>(r);
    inv.col_shift[dst] = (G - fwd.col_shift[r]) % G;
  }
  return inv;
}

namespace {

void check_grid(const TorusSystem& sys, const GridFunction& f) {
  if (f.dim() != sys.dim()) throw Error(Errc::invalid_argument, "grid function dimension does not match the system");
}

}  // namespace

GridFunction pullback(const TorusSystem& sys, const GridFunction& f, const BigInt& n) {
  check_grid(sys, f);
  const auto G = f.G();
  const auto t = grid_transport(sys, n, G);
  const auto src = f.values();
  std::vector<Complex> out(src.size());
  for (std::size_t r = 0; r < t.row_src.size(); ++r) {
    const Complex* in = src.data() + t.row_src[r] * G;
    Complex* dst = out.data() + static_cast<std::int64_t>(r) * G;
    const std::int64_t sh = t.col_shift[r];
    std::copy(in + sh, in + G, dst);
    std::copy(in, in + sh, dst + (G - sh));
  }
  return GridFunction(f.dim(), G, std::move(out));
}

Complex correlation(const TorusSystem& sys, const GridFunction& f, const GridFunction& g, const BigInt& n) {
  check_grid(sys, f);
  if (!f.same_grid(g)) throw Error(Errc::invalid_argument, "f and g must share a grid");
  const auto G = f.G();
  const auto t = grid_transport(sys, n, G);
  const auto fv = f.values();
  const auto gv = g.values();
  Neumaier re, im;
  for (std::size_t r = 0; r < t.row_src.size(); ++r) {
    const Complex* frow = fv.data() + t.row_src[r] * G;
    const Complex* grow = gv.data() + static_cast<std::int64_t>(r) * G;
    const std::int64_t sh = t.col_shift[r];
    double sr = 0.0, si = 0.0;
    auto accumulate = [&](const Complex* a, const Complex* b, std::int64_t len) {
      for (std::int64_t c = 0; c < len; ++c) {
        // a * conj(b)
        sr += a[c].real() * b[c].real() + a[c].imag() * b[c].imag();
        si += a[c].imag() * b[c].real() - a[c].real() * b[c].imag();
      }
    };
    accumulate(frow + sh, grow, G - sh);
    accumulate(frow, grow + (G - sh), sh);
    re.add(sr);
    im.add(si);
  }
  const double cells = static_cast<double>(f.size());
  return {re.value() / cells, im.value() / cells};
}

Complex SpectralSeries::at(std::int64_t n) const {
  const auto it = coeffs.find(n);
  if (it == coeffs.end()) throw Error(Errc::index_out_of_range, "spectral coefficient " + std::to_string(n) + " not computed");
  return it->second;
}

std::int64_t SpectralSeries::n_max() const {
  std::int64_t m = 0;
  for (const auto& [n, _] : coeffs) m = std::max(m, n < 0 ? -n : n);
  return m;
}

SpectralSeries spectral_series_at(const TorusSystem& sys, const GridFunction& f, const GridFunction& g,
                                  std::span<const std::int64_t> indices) {
  std::vector<Complex> vals(indices.size());
  parallel_for(indices.size(), [&](std::size_t i) { vals[i] = correlation(sys, f, g, BigInt(static_cast<long>(indices[i]))); });
  SpectralSeries s;
  for (std::size_t i = 0; i < indices.size(); ++i) s.coeffs[indices[i]] = vals[i];
  return s;
}

SpectralSeries spectral_series(const TorusSystem& sys, const GridFunction& f, const GridFunction& g, std::int64_t N_max) {
  if (N_max < 0) throw Error(Errc::invalid_argument, "N_max must be nonnegative");
  std::vector<std::int64_t> idx;
  for (std::int64_t n = -N_max; n <= N_max; ++n) idx.push_back(n);
  return spectral_series_at(sys, f, g, idx);
}

Rational wiener_exceedance(const SpectralSeries& series, double eps, std::span<const std::int64_t> sj) {
  if (sj.empty()) throw Error(Errc::invalid_argument, "S_j must be nonempty");
  std::int64_t hits = 0;
  for (auto n : sj) {
    if (std::abs(series.at(n)) > eps) ++hits;
  }
  return {hits, static_cast<std::int64_t>(sj.size())};
}

Rational wiener_exceedance(const SpectralSeries& series, double eps, const SequenceFamily& family, std::int64_t j) {
  return wiener_exceedance(series, eps, family.generate(j));
}

OffsetGenerator OffsetGenerator::powers(std::int64_t base) {
  if (base < 2) throw Error(Errc::invalid_argument, "powers need base >= 2");
  OffsetGenerator g;
  g.kind_ = Kind::powers;
  g.base_ = base;
  return g;
}

OffsetGenerator OffsetGenerator::squares() {
  OffsetGenerator g;
  g.kind_ = Kind::squares;
  return g;
}

OffsetGenerator OffsetGenerator::naturals() {
  OffsetGenerator g;
  g.kind_ = Kind::naturals;
  return g;
}

OffsetGenerator OffsetGenerator::primes() {
  OffsetGenerator g;
  g.kind_ = Kind::primes;
  return g;
}

OffsetGenerator OffsetGenerator::explicit_list(std::vector<BigInt> values) {
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i - 1] < values[i])) throw Error(Errc::invalid_argument, "explicit offsets must increase strictly");
  }
  OffsetGenerator g;
  g.kind_ = Kind::explicit_list;
  g.list_ = std::move(values);
  return g;
}

OffsetGenerator OffsetGenerator::parse(std::string_view spec) {
  if (spec == "squares") return squares();
  if (spec == "naturals") return naturals();
  if (spec == "primes") return primes();
  if (spec.substr(0, 7) == "powers:") {
    try {
      return powers(std::stoll(std::string(spec.substr(7))));
    } catch (const std::logic_error&) {
      throw Error(Errc::parse_error, "bad powers base in '" + std::string(spec) + "'");
    }
  }
  if (spec.substr(0, 5) == "list:") {
    std::vector<BigInt> values;
    std::stringstream ss{std::string(spec.substr(5))};
    for (std::string item; std::getline(ss, item, ',');) {
      try {
        values.emplace_back(item);
      } catch (const std::invalid_argument&) {
        throw Error(Errc::parse_error, "bad offset '" + item + "'");
      }
    }
    return explicit_list(std::move(values));
  }
  throw Error(Errc::parse_error, "unknown offset generator '" + std::string(spec) + "'");
}

std::optional<BigInt> OffsetGenerator::next() {
  const auto i = index_++;
  switch (kind_) {
    case Kind::powers:
      current_ = i == 0 ? BigInt(1) : BigInt(current_ * base_);
      return current_;
    case Kind::squares:
      return BigInt(i + 1) * (i + 1);
    case Kind::naturals:
      return BigInt(i + 1);
    case Kind::primes: {
      current_ = i == 0 ? BigInt(2) : BigInt(current_ + 1);
      mpz_nextprime(current_.get_mpz_t(), BigInt(current_ - 1).get_mpz_t());
      return current_;
    }
    case Kind::explicit_list:
      if (i >= static_cast<std::int64_t>(list_.size())) return std::nullopt;
      return list_[static_cast<std::size_t>(i)];
  }
  return std::nullopt;
}

std::string OffsetGenerator::describe() const {
  switch (kind_) {
    case Kind::powers: return "powers:" + std::to_string(base_);
    case Kind::squares: return "squares";
    case Kind::naturals: return "naturals";
    case Kind::primes: return "primes";
    case Kind::explicit_list: return "list";
  }
  return "?";
}

CesaroResult cesaro_select(const TorusSystem& sys, const GridFunction& f, OffsetGenerator gen, double tol,
                           std::int64_t N_cap, double slack, std::int64_t max_candidates) {
  check_grid(sys, f);
  if (!(tol > 0.0)) throw Error(Errc::invalid_argument, "tol must be positive");
  if (N_cap < 1) throw Error(Errc::invalid_argument, "N_cap must be positive");
  if (!(slack >= 1.0)) throw Error(Errc::invalid_argument, "slack must be at least 1");
  CesaroResult res;
  std::vector<Complex> sum(static_cast<std::size_t>(f.size()), Complex(0.0));
  double norm = 0.0;
  auto finish = [&](bool reached, std::string why) {
    res.reached = reached;
    res.final_norm = norm;
    res.stop_reason = std::move(why);
    if (!reached) res.error = Errc::tolerance_not_reached;
    return res;
  };
  while (true) {
    if (res.candidates_examined >= max_candidates) return finish(false, "candidate limit");
    const auto a = gen.next();
    if (!a) return finish(false, "generator exhausted");
    ++res.candidates_examined;
    std::optional<GridFunction> h;
    try {
      h = pullback(sys, f, -*a);
    } catch (const Error& e) {
      if (e.code() != Errc::precision_budget_exceeded) throw;
      return finish(false, "precision budget exhausted");
    }
    const auto hv = h->values();
    Neumaier sq;
    for (std::size_t i = 0; i < sum.size(); ++i) sq.add(std::norm(sum[i] + hv[i]));
    const double N = static_cast<double>(res.selected.size() + 1);
    const double candidate = std::sqrt(sq.value() / static_cast<double>(sum.size())) / N;
    if (!res.selected.empty() && candidate > slack * norm) continue;
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += hv[i];
    res.selected.push_back(*a);
    norm = candidate;
    res.norms.push_back(norm);
    if (norm < tol) return finish(true, "tolerance reached");
    if (static_cast<std::int64_t>(res.selected.size()) >= N_cap) return finish(false, "N_cap reached");
  }
}

GridFunction averaged_observable(const TorusSystem& sys, const GridFunction& f, std::span<const BigInt> a_prime) {
  check_grid(sys, f);
  if (a_prime.empty()) throw Error(Errc::invalid_argument, "A' must be nonempty");
  std::vector<Complex> sum(static_cast<std::size_t>(f.size()), Complex(0.0));
  for (const auto& a : a_prime) {
    const auto h = pullback(sys, f, -a);
    const auto hv = h.values();
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += hv[i];
  }
  const double inv = 1.0 / static_cast<double>(a_prime.size());
  for (auto& v : sum) v *= inv;
  return GridFunction(f.dim(), f.G(), std::move(sum));
}

double multi_correlation(const TorusSystem& sys, const GridFunction& f, const PolyVec& pvec, std::int64_t n) {
  check_grid(sys, f);
  const auto G = f.G();
  std::vector<GridTransport> ts;
  for (const auto& p : pvec.polys()) ts.push_back(grid_transport(sys, p.eval_big(BigInt(static_cast<long>(n))), G));
  const auto fv = f.values();
  Neumaier total;
  for (std::int64_t r = 0; r < static_cast<std::int64_t>(fv.size()) / G; ++r) {
    double row = 0.0;
    for (std::int64_t c = 0; c < G; ++c) {
      Complex prod = fv[r * G + c];
      for (const auto& t : ts) {
        std::int64_t col = c + t.col_shift[r];
        if (col >= G) col -= G;
        prod *= fv[t.row_src[r] * G + col];
      }
      row += prod.real();
    }
    total.add(row);
  }
  return total.value() / static_cast<double>(fv.size());
}

Rational weak_mixing_statistic(const TorusSystem& sys, const GridFunction& f, const PolyVec& pvec, double eps,
                               Window n_range) {
  if (n_range.empty()) throw Error(Errc::invalid_argument, "empty n_range");
  const double target = std::pow(f.mean().real(), pvec.k());
  const auto len = n_range.length();
  std::vector<char> hit(static_cast<std::size_t>(len), 0);
  parallel_for(hit.size(), [&](std::size_t i) {
    const double I = multi_correlation(sys, f, pvec, n_range.lo + static_cast<std::int64_t>(i));
    hit[i] = std::fabs(I - target) > eps;
  });
  return {static_cast<std::int64_t>(std::count(hit.begin(), hit.end(), 1)), len};
}

}  // namespace sumlab
