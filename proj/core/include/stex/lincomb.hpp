// Copyright 2026 The stex Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <string>

#include "stex/coefficient.hpp"
#include "stex/word.hpp"

namespace stex {

/// Maximum word length for truncation; nullopt means unbounded.
using MaxLen = std::optional<std::size_t>;
inline constexpr std::nullopt_t kUnbounded = std::nullopt;

inline bool within(const MaxLen& l, std::size_t n) { return !l || n <= *l; }

/// Instrumentation hook counting LinComb terms that are live at the same
/// time inside one worker. `cap` bounds the counter; exceeding it is
/// reported by the pipeline as a TermCapError, never as silent truncation.
struct TermBudget {
  std::size_t live = 0;
  std::size_t peak = 0;
  std::size_t cap = std::numeric_limits<std::size_t>::max();

  void add(std::size_t n) {
    live += n;
    if (live > peak) peak = live;
  }
  void remove(std::size_t n) { live -= n < live ? n : live; }
  bool over_cap() const { return peak > cap; }
};

/// A linear combination of iterated integrals: a canonical map from words to
/// nonzero polynomial coefficients. This is the representation of an
/// expansion. Terms are kept in canonical word order, so equality is
/// structural and serialization is deterministic.
class LinComb {
 public:
  using Terms = std::map<Word, Coefficient, WordOrder>;

  LinComb() = default;  // zero

  /// The multiplicative unit 1*J^().
  static LinComb unit() { return term(Coefficient(1), Word{}); }
  static LinComb term(Coefficient c, Word w);

  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  std::size_t max_word_length() const;

  const Terms& terms() const { return terms_; }
  Terms::const_iterator begin() const { return terms_.begin(); }
  Terms::const_iterator end() const { return terms_.end(); }

  /// Accumulates c*J^w, pruning the term if the sum cancels to zero.
  void add_term(const Word& w, const Coefficient& c);
  void add_term(const Word& w, const Rational& r) { add_term(w, Coefficient(r)); }

  LinComb& operator+=(const LinComb& o);
  LinComb operator+(const LinComb& o) const;

  /// Scales every coefficient; zero annihilates.
  void scale(const Coefficient& c);

  bool operator==(const LinComb&) const = default;

 private:
  Terms terms_;
};

/// Removes every term whose word is longer than `max_len`.
LinComb truncate(const LinComb& x, const MaxLen& max_len);

/// Appends `l` to every word of `x` (the integration rule), dropping terms
/// that leave the length bound.
LinComb append_letter(const LinComb& x, Letter l, const MaxLen& max_len = kUnbounded);

/// Canonical text form, one term per line: "<coefficient> ; <word>" with
/// terms in canonical word order. The zero combination is the empty string.
std::string serialize_lincomb(const LinComb& x);
void serialize_lincomb(const LinComb& x, std::ostream& out);

/// Inverse of serialize_lincomb; accepts any grammar-conformant text and
/// sums repeated words. Blank lines are ignored. Throws ParseError with the
/// 1-based line number (offset by `line0 - 1`).
LinComb parse_lincomb(std::string_view text, std::size_t line0 = 1);

/// Parses a single "<coefficient> ; <word>" line.
std::pair<Word, Coefficient> parse_expansion_line(std::string_view line, std::size_t lineno);

}  // namespace stex
