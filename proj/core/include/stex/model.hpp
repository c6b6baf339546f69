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

#include <map>
#include <optional>
#include <vector>

#include "stex/lincomb.hpp"
#include "stex/shuffle.hpp"

namespace stex {

/// A polynomial in the scalar state y whose coefficients are themselves
/// exact parameter polynomials, e.g. f(y) = a*(1-y) or f(y) = b*y^2.
class StatePolynomial {
 public:
  StatePolynomial() = default;
  /// Coefficients by ascending degree in y; trailing zeros are trimmed.
  explicit StatePolynomial(std::vector<Coefficient> coeffs);

  bool is_zero() const { return coeffs_.empty(); }
  /// Degree of the zero polynomial is 0 by convention here.
  unsigned degree() const { return coeffs_.empty() ? 0 : static_cast<unsigned>(coeffs_.size()) - 1; }
  const std::vector<Coefficient>& coeffs() const { return coeffs_; }
  Coefficient coeff(unsigned k) const { return k < coeffs_.size() ? coeffs_[k] : Coefficient(); }

  StatePolynomial derivative() const;
  StatePolynomial operator*(const StatePolynomial& o) const;
  StatePolynomial operator-(const StatePolynomial& o) const;
  StatePolynomial scaled(const Rational& r) const;

  /// Exact evaluation at a parameter polynomial.
  Coefficient eval(const Coefficient& y) const;

  /// Horner evaluation at a linear combination, multiplying in the shuffle
  /// algebra and truncating at every step. y^0 maps to 1*J^().
  LinComb eval_lincomb(const LinComb& y, const MaxLen& max_len = kUnbounded) const;

  bool operator==(const StatePolynomial&) const = default;

 private:
  std::vector<Coefficient> coeffs_;
};

/// A one-dimensional differential equation dY = sum_i f_i(Y) dX^(i) with
/// polynomial vector fields, one per driver.
struct Model {
  unsigned n_drivers = 0;
  std::vector<StatePolynomial> f;      // size n_drivers
  Coefficient y0;                      // rational constant or parameter symbol
  std::optional<Letter> time_driver;   // which letter is deterministic time
  std::vector<Letter> driver_letters;  // labels; defaults to 0..n-1

  /// The maximum degree q over all vector fields.
  unsigned max_degree() const;
  /// Letters default to 0..n-1 when not set explicitly.
  Letter letter_of(unsigned driver) const;
  /// Throws ConfigError on inconsistent sizes or out-of-range letters.
  void validate() const;
};

/// Q^k as a linear combination over single-letter words, for k = 0..q.
/// Keys are exactly 0..q; an entry may be the zero combination.
using QTable = std::map<unsigned, LinComb>;

/// Taylor re-centering: returns (g_0, ..., g_q) with g_k = (1/k!) d^k P(y0),
/// so that sum_k g_k (y - y0)^k reproduces P exactly.
std::vector<Coefficient> taylor_recenter(const StatePolynomial& P, const Coefficient& y0);

/// Q^k = sum_i g_{k,i} J^(letter_i) with g from re-centering each f_i at y0.
QTable build_q_table(const Model& model);

/// Stratonovich drift for an Ito diffusion dy = mu dt + sigma dB:
/// returns mu - (1/2) sigma' sigma.
StatePolynomial ito_to_stratonovich(const StatePolynomial& mu, const StatePolynomial& sigma);

}  // namespace stex
