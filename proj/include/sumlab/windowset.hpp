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
#include <vector>

#include "sumlab/common.hpp"

namespace sumlab {

/// Half-open integer interval [lo, hi).
struct Window {
  std::int64_t lo = 0;
  std::int64_t hi = 0;

  std::int64_t length() const { return hi > lo ? hi - lo : 0; }
  bool empty() const { return hi <= lo; }
  bool contains(std::int64_t x) const { return lo <= x && x < hi; }
  bool contains(const Window& w) const { return w.empty() || (lo <= w.lo && w.hi <= hi); }
  Window translated(std::int64_t delta) const { return {lo + delta, hi + delta}; }

  friend bool operator==(const Window&, const Window&) = default;
};

Window intersect(const Window& a, const Window& b);

/// Finite truncation of an infinite offset set: strictly increasing, nonempty.
class FiniteOffsets {
 public:
  /// Sorts and deduplicates; throws InvalidArgument when empty.
  explicit FiniteOffsets(std::vector<std::int64_t> elements);

  std::span<const std::int64_t> elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  std::int64_t min() const { return elements_.front(); }
  std::int64_t max() const { return elements_.back(); }

 private:
  std::vector<std::int64_t> elements_;
};

/// A subset of Z known exactly on a finite valid region.
///
/// Bit i of the packed bitmap is the membership of window.lo + i, stored in
/// 64-bit words with the least significant bit holding the lowest integer.
/// Bits outside the valid region are always zero. Instances are immutable.
class WindowSet {
 public:
  WindowSet() = default;

  static WindowSet from_elements(std::span<const std::int64_t> elements, Window window);
  static WindowSet from_predicate(Window window, const std::function<bool(std::int64_t)>& pred);
  /// `words` holds bit i = membership of window.lo + i; bits outside `valid` are cleared.
  static WindowSet from_words(Window window, Window valid, std::vector<std::uint64_t> words);
  static WindowSet full(Window window);

  const Window& window() const { return window_; }
  const Window& valid() const { return valid_; }
  std::span<const std::uint64_t> words() const { return words_; }

  bool contains(std::int64_t x) const;
  std::uint64_t count() const;
  std::uint64_t count_in(Window w) const;
  std::vector<std::int64_t> elements() const;

  /// Membership of start + i packed into bit i; zero outside the window.
  std::vector<std::uint64_t> extract(std::int64_t start, std::int64_t length) const;

  /// Same set with the valid region narrowed to valid() ∩ w.
  WindowSet restricted(Window w) const;
  /// Same valid data re-laid on a different bitmap window (must contain valid()).
  WindowSet relaid(Window window) const;

  friend bool operator==(const WindowSet&, const WindowSet&) = default;

 private:
  WindowSet(Window window, Window valid, std::vector<std::uint64_t> words);
  std::uint64_t read64(std::int64_t rel) const;

  Window window_{};
  Window valid_{};
  std::vector<std::uint64_t> words_;
};

/// {x - t : x in S}; window and valid both move by -t, so x ∈ shift(S,t) ⇔ x+t ∈ S.
WindowSet shift(const WindowSet& s, std::int64_t t);

/// ∩_t shift(E, t) via word-level shift-AND. Throws EmptyValidRegion.
WindowSet intersect_translates(const WindowSet& e, std::span<const std::int64_t> offsets);

/// A + B as an OR of translated bitmaps of B; valid only where every a ∈ A can be tested.
WindowSet sumset(const FiniteOffsets& a, const WindowSet& b);

/// D_A = ∪_{a∈A} T^a D; the same computation as sumset(A, D).
WindowSet union_translates(const WindowSet& d, const FiniteOffsets& a);

/// Union on the intersection of the valid regions.
WindowSet unite(const WindowSet& a, const WindowSet& b);

/// "WINDOWSET lo hi valid_lo valid_hi" followed by 64 hex chars per line.
void write_windowset(std::ostream& out, const WindowSet& s);
WindowSet read_windowset(std::istream& in);

}  // namespace sumlab
