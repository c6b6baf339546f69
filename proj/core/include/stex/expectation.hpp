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

#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "stex/lincomb.hpp"

namespace stex {

/// Expectation of one iterated Stratonovich integral for (time, independent
/// Brownian motions): the value is p * t^q_exp / q_exp!.
struct ExpectationMonomial {
  Rational p;          // (1/2)^(number of Brownian pairs)
  unsigned q_exp = 0;  // pairs + time letters

  Rational value_coefficient() const { return p / Rational(factorial(q_exp)); }
  bool operator==(const ExpectationMonomial&) const = default;
};

/// E J^w for time plus independent standard Brownian drivers, by the
/// right-to-left scan: a time letter consumes one position, two adjacent
/// equal Brownian letters consume two, anything else makes the expectation
/// exactly zero (nullopt). Runs in at most |w| steps. E J^() = 1.
std::optional<ExpectationMonomial> expect_word(const Word& w, Letter time_letter = 0);

/// An exact polynomial in the time horizon with parameter-polynomial
/// coefficients, as produced by taking expectations of an expansion.
class TimePolynomial {
 public:
  void add(unsigned power, const Coefficient& c);

  bool is_zero() const { return terms_.empty(); }
  const std::map<unsigned, Coefficient>& terms() const { return terms_; }
  Coefficient coefficient(unsigned power) const;

  /// Terms in ascending powers of the time symbol, in the coefficient
  /// grammar: "a*T-1/2*a^2*T^2+(1/4*a^3*b^2-1/24*a^4)*T^4". Zero is "0".
  std::string to_string(const std::string& time_symbol = "T") const;

  bool operator==(const TimePolynomial&) const = default;

 private:
  std::map<unsigned, Coefficient> terms_;  // no zero coefficients
};

/// Termwise expectation of a whole expansion.
TimePolynomial expect_expansion(const LinComb& x, Letter time_letter = 0);

/// Streaming variant: reads expansion lines one at a time so the expansion
/// is never fully resident. Parse errors carry line numbers.
TimePolynomial expect_expansion_stream(std::istream& in, Letter time_letter = 0);

}  // namespace stex
