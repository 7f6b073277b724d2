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
#include "sumlab/progressions.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>
#include <sstream>

#include "sumlab/density.hpp"
#include "sumlab/parallel.hpp"

namespace sumlab {

Polynomial::Polynomial(std::vector<std::int64_t> coeffs) : coeffs_(std::move(coeffs)) {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Polynomial Polynomial::monomial(std::int64_t coeff, int degree) {
  if (degree < 0) throw Error(Errc::invalid_argument, "negative degree");
  std::vector<std::int64_t> c(static_cast<std::size_t>(degree) + 1, 0);
  c.back() = coeff;
  return Polynomial(std::move(c));
}

Polynomial Polynomial::parse(std::string_view text) {
  std::string s;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  }
  if (s.empty()) throw Error(Errc::parse_error, "empty polynomial");
  std::vector<std::int64_t> c;
  std::size_t i = 0;
  auto fail = [&] { throw Error(Errc::parse_error, "cannot parse polynomial '" + std::string(text) + "'"); };
  auto read_int = [&](std::int64_t& out) {
    std::size_t start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (start == i) return false;
    try {
      out = std::stoll(s.substr(start, i - start));
    } catch (const std::exception&) {
      fail();
    }
    return true;
  };
  while (i < s.size()) {
    std::int64_t sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    } else if (i != 0) {
      fail();
    }
    std::int64_t coef = 1;
    const bool has_coef = read_int(coef);
    if (has_coef && i < s.size() && s[i] == '*') ++i;
    int degree = 0;
    if (i < s.size() && s[i] == 'n') {
      ++i;
      degree = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        std::int64_t d = 0;
        if (!read_int(d) || d > 64) fail();
        degree = static_cast<int>(d);
      }
    } else if (!has_coef) {
      fail();
    }
    if (c.size() <= static_cast<std::size_t>(degree)) c.resize(static_cast<std::size_t>(degree) + 1, 0);
    c[static_cast<std::size_t>(degree)] += sign * coef;
  }
  return Polynomial(std::move(c));
}

std::int64_t Polynomial::operator()(std::int64_t n) const {
  i128 acc = 0;
  for (std::size_t i = coeffs_.size(); i-- > 0;) {
    if (__builtin_mul_overflow(acc, static_cast<i128>(n), &acc) ||
        __builtin_add_overflow(acc, static_cast<i128>(coeffs_[i]), &acc) || acc > INT64_MAX || acc < INT64_MIN) {
      throw Error(Errc::overflow, to_string() + " overflows 64 bits at n = " + std::to_string(n));
    }
  }
  return static_cast<std::int64_t>(acc);
}

BigInt Polynomial::eval_big(const BigInt& n) const {
  BigInt acc = 0;
  for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * n + BigInt(static_cast<long>(coeffs_[i]));
  return acc;
}

std::string Polynomial::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t d = coeffs_.size(); d-- > 0;) {
    const auto c = coeffs_[d];
    if (c == 0) continue;
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << '-';
    const auto mag = c < 0 ? -static_cast<i128>(c) : static_cast<i128>(c);
    if (mag != 1 || d == 0) os << static_cast<std::int64_t>(mag);
    if (d >= 1) os << 'n';
    if (d >= 2) os << '^' << d;
    first = false;
  }
  return first ? "0" : os.str();
}

PolyVec PolyVec::arithmetic(int k) {
  if (k < 1) throw Error(Errc::invalid_argument, "k must be at least 1");
  std::vector<Polynomial> polys;
  for (int i = 1; i < k; ++i) polys.push_back(Polynomial::monomial(i, 1));
  return PolyVec(std::move(polys));
}

PolyVec PolyVec::parse(std::string_view text) {
  std::vector<Polynomial> polys;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto piece = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    polys.push_back(Polynomial::parse(piece));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return PolyVec(std::move(polys));
}

int PolyVec::degree() const {
  int d = 0;
  for (const auto& p : polys_) d = std::max(d, p.degree());
  return d;
}

std::vector<std::int64_t> PolyVec::offsets(std::int64_t n) const {
  std::vector<std::int64_t> out{0};
  for (const auto& p : polys_) out.push_back(p(n));
  return out;
}

std::string PolyVec::to_string() const {
  std::string s;
  for (const auto& p : polys_) s += (s.empty() ? "" : ", ") + p.to_string();
  return s;
}

Rational pattern_correlation_density(const WindowSet& e, std::span<const std::int64_t> offsets, std::int64_t M) {
  std::vector<std::int64_t> pattern(offsets.begin(), offsets.end());
  pattern.push_back(0);
  std::sort(pattern.begin(), pattern.end());
  pattern.erase(std::unique(pattern.begin(), pattern.end()), pattern.end());
  return banach_density(intersect_translates(e, pattern), M).value;
}

Rational ap_correlation_density(const WindowSet& e, int k, std::int64_t n, std::int64_t M) {
  if (k < 1) throw Error(Errc::invalid_argument, "k must be at least 1");
  std::vector<std::int64_t> offsets;
  for (int i = 0; i < k; ++i) {
    std::int64_t t = 0;
    if (__builtin_mul_overflow(n, static_cast<std::int64_t>(i), &t)) throw Error(Errc::overflow, "i*n overflows");
    offsets.push_back(t);
  }
  return pattern_correlation_density(e, offsets, M);
}

std::string_view scan_flag_name(ScanFlag f) {
  switch (f) {
    case ScanFlag::ok: return "OK";
    case ScanFlag::empty_valid_region: return "EMPTY_VALID_REGION";
    case ScanFlag::out_of_range: return "OUT_OF_RANGE";
  }
  return "?";
}

ScanFlag parse_scan_flag(std::string_view name) {
  for (auto f : {ScanFlag::ok, ScanFlag::empty_valid_region, ScanFlag::out_of_range}) {
    if (scan_flag_name(f) == name) return f;
  }
  throw Error(Errc::parse_error, "unknown scan flag '" + std::string(name) + "'");
}

void summarize(ScanReport& r) {
  r.passing.clear();
  std::int64_t counted = 0;
  for (const auto& en : r.entries) {
    if (en.flag == ScanFlag::out_of_range) continue;
    ++counted;
    if (en.flag == ScanFlag::ok &&
        (r.strict ? greater_than(en.density, r.threshold) : at_least(en.density, r.threshold))) r.passing.push_back(en.n);
  }
  if (r.passing.size() < 2) {
    r.max_gap = r.n_range.length();
  } else {
    r.max_gap = 0;
    for (std::size_t i = 1; i < r.passing.size(); ++i) r.max_gap = std::max(r.max_gap, r.passing[i] - r.passing[i - 1]);
  }
  r.relative_frequency = {static_cast<std::int64_t>(r.passing.size()), std::max<std::int64_t>(counted, 1)};
}

ScanReport scan_good_n(const WindowSet& e, const PolyVec& pvec, double threshold, Window n_range, std::int64_t M,
                       const NFilter& filter) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw Error(Errc::invalid_argument, "threshold must lie in [0,1]");
  if (n_range.empty()) throw Error(Errc::invalid_argument, "empty n_range");
  ScanReport r;
  r.threshold = threshold;
  r.n_range = n_range;
  r.M = M;
  for (std::int64_t n = n_range.lo; n < n_range.hi; ++n) {
    if (!filter || filter(n)) r.entries.push_back({n, {0, 1}, ScanFlag::ok});
  }
  parallel_for(r.entries.size(), [&](std::size_t i) {
    auto& en = r.entries[i];
    try {
      en.density = pattern_correlation_density(e, pvec.offsets(en.n), M);
    } catch (const Error& err) {
      switch (err.code()) {
        case Errc::empty_valid_region: en.flag = ScanFlag::empty_valid_region; break;
        case Errc::overflow:
        case Errc::window_too_small: en.flag = ScanFlag::out_of_range; break;
        default: throw;
      }
      en.density = {0, 1};
    }
  });
  summarize(r);
  return r;
}

nlohmann::json to_json(const ScanReport& r) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& en : r.entries) {
    entries.push_back({en.n, en.density.num, en.density.den, scan_flag_name(en.flag)});
  }
  return {{"threshold", r.threshold},
          {"strict", r.strict},
          {"n_first", r.n_range.lo},
          {"n_last", r.n_range.hi - 1},
          {"M", r.M},
          {"passing_count", r.passing.size()},
          {"max_gap", r.max_gap},
          {"max_gap_sentinel", r.passing.size() < 2},
          {"relative_frequency_num", r.relative_frequency.num},
          {"relative_frequency_den", r.relative_frequency.den},
          {"relative_frequency", r.relative_frequency.value()},
          {"passing", r.passing},
          {"entries", entries}};
}

ScanReport scan_report_from_json(const nlohmann::json& j) {
  try {
    ScanReport r;
    r.threshold = j.at("threshold").get<double>();
    r.strict = j.value("strict", false);
    r.n_range = {j.at("n_first").get<std::int64_t>(), j.at("n_last").get<std::int64_t>() + 1};
    r.M = j.at("M").get<std::int64_t>();
    for (const auto& en : j.at("entries")) {
      r.entries.push_back({en.at(0).get<std::int64_t>(),
                           {en.at(1).get<std::int64_t>(), en.at(2).get<std::int64_t>()},
                           parse_scan_flag(en.at(3).get<std::string>())});
    }
    summarize(r);
    return r;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(Errc::parse_error, std::string("malformed scan report: ") + ex.what());
  }
}

void write_csv(std::ostream& out, const ScanReport& r) {
  out << "n,density\n";
  const auto old = out.precision(17);
  for (const auto& en : r.entries) out << en.n << ',' << en.density.value() << '\n';
  out.precision(old);
}

}  // namespace sumlab
