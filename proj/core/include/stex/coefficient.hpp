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

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stex/rational.hpp"

namespace stex {

/// A product of parameter symbols with positive exponents, e.g. a^3*b^2.
/// Symbols are lowercase identifiers ([a-z][a-z0-9]*). The empty product is
/// the unit monomial.
class Monomial {
 public:
  Monomial() = default;

  static Monomial unit() { return Monomial(); }
  static Monomial symbol(std::string name, std::uint32_t exp = 1);
  /// Builds from an unsorted factor list, merging repeated symbols.
  static Monomial from_factors(std::vector<std::pair<std::string, std::uint32_t>> factors);

  bool is_unit() const { return factors_.empty(); }
  unsigned degree() const;

  Monomial operator*(const Monomial& o) const;

  bool operator==(const Monomial&) const = default;

  /// Graded lexicographic order on symbol names: lower total degree first,
  /// ties broken so that a^2 < a*b < b^2.
  friend bool monomial_less(const Monomial& a, const Monomial& b);

  /// "a^2*b"; the unit monomial renders as "".
  std::string to_string() const;

  const std::vector<std::pair<std::string, std::uint32_t>>& factors() const { return factors_; }

 private:
  // Sorted by symbol name; exponents are always > 0.
  std::vector<std::pair<std::string, std::uint32_t>> factors_;
};

struct MonomialOrder {
  bool operator()(const Monomial& a, const Monomial& b) const { return monomial_less(a, b); }
};

/// An exact multivariate polynomial over the rationals in named parameter
/// symbols. This is the coefficient ring of every expansion: no floats, no
/// rounding, and no zero terms are ever stored.
class Coefficient {
 public:
  Coefficient() = default;  // zero
  Coefficient(int v) : Coefficient(Rational(v)) {}
  Coefficient(Rational r);
  Coefficient(Monomial m, Rational r);

  static Coefficient symbol(std::string name);

  bool is_zero() const { return terms_.empty(); }
  bool is_one() const;
  bool is_constant() const;
  /// The rational value if constant (including zero); throws otherwise.
  Rational constant_value() const;

  /// Accumulates r * m, pruning the term if it cancels to zero.
  void add_term(const Monomial& m, const Rational& r);

  std::size_t term_count() const { return terms_.size(); }
  const std::map<Monomial, Rational, MonomialOrder>& terms() const { return terms_; }

  Coefficient& operator+=(const Coefficient& o);
  Coefficient& operator-=(const Coefficient& o);
  Coefficient operator+(const Coefficient& o) const;
  Coefficient operator-(const Coefficient& o) const;
  Coefficient operator-() const;
  Coefficient operator*(const Coefficient& o) const;
  Coefficient& operator*=(const Coefficient& o);
  Coefficient& operator*=(const Rational& r);
  Coefficient pow(unsigned k) const;

  bool operator==(const Coefficient&) const = default;

  /// Canonical form: terms in monomial order joined with +/-, each term
  /// "<rational>*<sym>^<exp>*..." with unit rationals and unit exponents
  /// elided, e.g. "a-a*y0", "-1/2", "2*a^2*b". Zero renders as "0".
  std::string to_string() const;

 private:
  std::map<Monomial, Rational, MonomialOrder> terms_;

  friend Coefficient operator*(const Rational& r, const Coefficient& c);
};

Coefficient operator*(const Rational& r, const Coefficient& c);

/// Parses a coefficient expression: sums and differences of products of
/// rationals ("p" or "p/q"), symbols with optional integer exponents, and
/// parenthesized subexpressions, e.g. "a*(1-y0)^2 - 1/3*b".
/// Positions in errors are 1-based; `line`/`col0` offset them for callers
/// embedding expressions in larger documents.
Coefficient parse_coefficient(std::string_view text, std::size_t line = 1, std::size_t col0 = 1);

}  // namespace stex
