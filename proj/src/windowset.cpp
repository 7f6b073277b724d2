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

#include "sumlab/windowset.hpp"

#include <algorithm>
#include <bit>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace sumlab {

namespace {

std::size_t word_count(std::int64_t bits) { return static_cast<std::size_t>((bits + 63) / 64); }

void clear_outside(std::vector<std::uint64_t>& words, std::int64_t len, std::int64_t keep_lo,
                   std::int64_t keep_hi) {
  // Keeps bits [keep_lo, keep_hi) of a len-bit map, clears everything else.
  keep_lo = std::clamp<std::int64_t>(keep_lo, 0, len);
  keep_hi = std::clamp<std::int64_t>(keep_hi, keep_lo, len);
  const auto total = static_cast<std::int64_t>(words.size()) * 64;
  for (std::int64_t w = 0; w < static_cast<std::int64_t>(words.size()); ++w) {
    const std::int64_t b0 = w * 64;
    const std::int64_t b1 = std::min(b0 + 64, total);
    if (b1 <= keep_lo || b0 >= keep_hi) {
      words[w] = 0;
      continue;
    }
    std::uint64_t mask = ~0ULL;
    if (keep_lo > b0) mask &= ~0ULL << (keep_lo - b0);
    if (keep_hi < b0 + 64) mask &= (keep_hi - b0 == 0) ? 0ULL : (~0ULL >> (64 - (keep_hi - b0)));
    words[w] &= mask;
  }
}

}  // namespace

Window intersect(const Window& a, const Window& b) {
  return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

FiniteOffsets::FiniteOffsets(std::vector<std::int64_t> elements) : elements_(std::move(elements)) {
  std::sort(elements_.begin(), elements_.end());
  elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
  if (elements_.empty()) throw Error(Errc::invalid_argument, "offset set must be nonempty");
}

WindowSet::WindowSet(Window window, Window valid, std::vector<std::uint64_t> words)
    : window_(window), valid_(valid), words_(std::move(words)) {}

WindowSet WindowSet::from_words(Window window, Window valid, std::vector<std::uint64_t> words) {
  if (window.empty()) throw Error(Errc::invalid_argument, "window must satisfy lo < hi");
  if (!window.contains(valid)) throw Error(Errc::invalid_argument, "valid region must lie inside window");
  words.resize(word_count(window.length()), 0);
  if (valid.empty()) valid = {window.lo, window.lo};
  clear_outside(words, window.length(), valid.lo - window.lo, valid.hi - window.lo);
  return WindowSet(window, valid, std::move(words));
}

WindowSet WindowSet::from_elements(std::span<const std::int64_t> elements, Window window) {
  if (window.empty()) throw Error(Errc::invalid_argument, "window must satisfy lo < hi");
  std::vector<std::uint64_t> words(word_count(window.length()), 0);
  for (auto x : elements) {
    if (!window.contains(x)) continue;
    const auto rel = static_cast<std::uint64_t>(x - window.lo);
    words[rel >> 6] |= 1ULL << (rel & 63);
  }
  return WindowSet(window, window, std::move(words));
}

WindowSet WindowSet::from_predicate(Window window, const std::function<bool(std::int64_t)>& pred) {
  if (window.empty()) throw Error(Errc::invalid_argument, "window must satisfy lo < hi");
  std::vector<std::uint64_t> words(word_count(window.length()), 0);
  for (std::int64_t rel = 0; rel < window.length(); ++rel) {
    if (pred(window.lo + rel)) words[rel >> 6] |= 1ULL << (rel & 63);
  }
  return WindowSet(window, window, std::move(words));
}

WindowSet WindowSet::full(Window window) {
  return from_words(window, window, std::vector<std::uint64_t>(word_count(window.length()), ~0ULL));
}

bool WindowSet::contains(std::int64_t x) const {
  if (!valid_.contains(x)) return false;
  const auto rel = static_cast<std::uint64_t>(x - window_.lo);
  return (words_[rel >> 6] >> (rel & 63)) & 1ULL;
}

std::uint64_t WindowSet::count() const {
  std::uint64_t c = 0;
  for (auto w : words_) c += std::popcount(w);
  return c;
}

std::uint64_t WindowSet::count_in(Window w) const {
  const Window r = intersect(w, valid_);
  if (r.empty()) return 0;
  std::uint64_t c = 0;
  for (auto word : extract(r.lo, r.length())) c += std::popcount(word);
  return c;
}

std::vector<std::int64_t> WindowSet::elements() const {
  std::vector<std::int64_t> out;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    std::uint64_t bits = words_[w];
    while (bits) {
      const int b = std::countr_zero(bits);
      out.push_back(window_.lo + static_cast<std::int64_t>(w * 64 + b));
      bits &= bits - 1;
    }
  }
  return out;
}

std::uint64_t WindowSet::read64(std::int64_t rel) const {
  // 64 bits starting at window-relative bit `rel`, zero-filled outside the map.
  const auto nwords = static_cast<std::int64_t>(words_.size());
  const std::int64_t q = rel >= 0 ? rel / 64 : -((-rel + 63) / 64);
  const auto s = static_cast<unsigned>(rel - q * 64);
  const std::uint64_t lo = (q >= 0 && q < nwords) ? words_[q] : 0;
  if (s == 0) return lo;
  const std::uint64_t hi = (q + 1 >= 0 && q + 1 < nwords) ? words_[q + 1] : 0;
  return (lo >> s) | (hi << (64 - s));
}

std::vector<std::uint64_t> WindowSet::extract(std::int64_t start, std::int64_t length) const {
  if (length <= 0) return {};
  std::vector<std::uint64_t> out(word_count(length));
  const std::int64_t base = start - window_.lo;
  const std::int64_t span_bits = static_cast<std::int64_t>(words_.size()) * 64;
  for (std::size_t w = 0; w < out.size(); ++w) {
    const std::int64_t rel = base + static_cast<std::int64_t>(w) * 64;
    if (rel + 64 <= 0 || rel >= span_bits) continue;
    out[w] = read64(rel);
  }
  if (length % 64) out.back() &= ~0ULL >> (64 - length % 64);
  return out;
}

WindowSet WindowSet::restricted(Window w) const {
  const Window v = intersect(valid_, w);
  return from_words(window_, v.empty() ? Window{window_.lo, window_.lo} : v, words_);
}

WindowSet WindowSet::relaid(Window window) const {
  if (!window.contains(valid_)) throw Error(Errc::invalid_argument, "new window must contain valid region");
  return from_words(window, valid_, extract(window.lo, window.length()));
}

WindowSet shift(const WindowSet& s, std::int64_t t) {
  const Window v = s.valid().translated(-t);
  std::vector<std::uint64_t> words(s.words().begin(), s.words().end());
  return WindowSet::from_words(s.window().translated(-t), v, std::move(words));
}

WindowSet intersect_translates(const WindowSet& e, std::span<const std::int64_t> offsets) {
  if (offsets.empty()) throw Error(Errc::invalid_argument, "offset list must be nonempty");
  const auto [tmin, tmax] = std::minmax_element(offsets.begin(), offsets.end());
  const Window valid{e.valid().lo - *tmin, e.valid().hi - *tmax};
  if (valid.empty()) throw Error(Errc::empty_valid_region, "translates do not overlap on the valid region");
  const Window window{e.window().lo - *tmin, e.window().hi - *tmax};

  const std::int64_t len = valid.length();
  std::vector<std::uint64_t> acc = e.extract(valid.lo + offsets[0], len);
  for (std::size_t i = 1; i < offsets.size(); ++i) {
    const auto next = e.extract(valid.lo + offsets[i], len);
    for (std::size_t w = 0; w < acc.size(); ++w) acc[w] &= next[w];
  }
  return WindowSet::from_words(valid, valid, std::move(acc)).relaid(window);
}

WindowSet sumset(const FiniteOffsets& a, const WindowSet& b) {
  const Window valid{b.valid().lo + a.max(), b.valid().hi + a.min()};
  if (valid.empty()) throw Error(Errc::empty_valid_region, "offset span exceeds the valid region of B");
  const Window window{b.window().lo + a.min(), b.window().hi + a.max()};

  const std::int64_t len = valid.length();
  std::vector<std::uint64_t> acc(word_count(len), 0);
  for (auto off : a.elements()) {
    const auto next = b.extract(valid.lo - off, len);
    for (std::size_t w = 0; w < acc.size(); ++w) acc[w] |= next[w];
  }
  return WindowSet::from_words(valid, valid, std::move(acc)).relaid(window);
}

WindowSet union_translates(const WindowSet& d, const FiniteOffsets& a) { return sumset(a, d); }

WindowSet unite(const WindowSet& a, const WindowSet& b) {
  const Window valid = intersect(a.valid(), b.valid());
  if (valid.empty()) throw Error(Errc::empty_valid_region, "valid regions do not overlap");
  auto acc = a.extract(valid.lo, valid.length());
  const auto other = b.extract(valid.lo, valid.length());
  for (std::size_t w = 0; w < acc.size(); ++w) acc[w] |= other[w];
  return WindowSet::from_words(valid, valid, std::move(acc));
}

void write_windowset(std::ostream& out, const WindowSet& s) {
  out << "WINDOWSET " << s.window().lo << ' ' << s.window().hi << ' ' << s.valid().lo << ' '
      << s.valid().hi << '\n';
  static constexpr char kHex[] = "0123456789abcdef";
  std::string line;
  for (std::size_t w = 0; w < s.words().size(); ++w) {
    // Nibble j of a word holds bits 4j..4j+3, emitted lowest nibble first.
    std::uint64_t word = s.words()[w];
    for (int nib = 0; nib < 16; ++nib) {
      line.push_back(kHex[word & 0xF]);
      word >>= 4;
    }
    if (line.size() == 64) {
      out << line << '\n';
      line.clear();
    }
  }
  if (!line.empty()) out << line << '\n';
}

WindowSet read_windowset(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw Error(Errc::parse_error, "missing WINDOWSET header");
  std::istringstream hs(header);
  std::string tag;
  Window window, valid;
  if (!(hs >> tag >> window.lo >> window.hi >> valid.lo >> valid.hi) || tag != "WINDOWSET") {
    throw Error(Errc::parse_error, "malformed WINDOWSET header: " + header);
  }
  if (window.empty()) throw Error(Errc::parse_error, "empty window in header");
  const std::size_t nwords = word_count(window.length());
  std::vector<std::uint64_t> words;
  words.reserve(nwords);
  std::string line;
  std::uint64_t cur = 0;
  int nib = 0;
  while (words.size() < nwords && std::getline(in, line)) {
    for (char c : line) {
      int v;
      if (c >= '0' && c <= '9') v = c - '0';
      else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
      else if (c == '\r' || c == ' ') continue;
      else throw Error(Errc::parse_error, std::string("invalid hex digit '") + c + "'");
      cur |= static_cast<std::uint64_t>(v) << (4 * nib);
      if (++nib == 16) {
        words.push_back(cur);
        cur = 0;
        nib = 0;
      }
    }
  }
  if (words.size() != nwords || nib != 0) throw Error(Errc::parse_error, "bitmap length does not match window");
  const auto masked = WindowSet::from_words(window, valid, words);
  if (!std::equal(masked.words().begin(), masked.words().end(), words.begin())) {
    throw Error(Errc::parse_error, "bits set outside the valid region");
  }
  return masked;
}

}  // namespace sumlab
