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

#include "stex/model.hpp"

#include <algorithm>

#include "stex/errors.hpp"

namespace stex {

StatePolynomial::StatePolynomial(std::vector<Coefficient> coeffs) : coeffs_(std::move(coeffs)) {
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

StatePolynomial StatePolynomial::derivative() const {
  std::vector<Coefficient> d;
  for (std::size_t k = 1; k < coeffs_.size(); ++k)
    d.push_back(Rational(static_cast<long>(k)) * coeffs_[k]);
  return StatePolynomial(std::move(d));
}

StatePolynomial StatePolynomial::operator*(const StatePolynomial& o) const {
  if (coeffs_.empty() || o.coeffs_.empty()) return {};
  std::vector<Coefficient> p(coeffs_.size() + o.coeffs_.size() - 1);
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    for (std::size_t j = 0; j < o.coeffs_.size(); ++j) p[i + j] += coeffs_[i] * o.coeffs_[j];
  return StatePolynomial(std::move(p));
}

StatePolynomial StatePolynomial::operator-(const StatePolynomial& o) const {
  std::vector<Coefficient> d(std::max(coeffs_.size(), o.coeffs_.size()));
  for (std::size_t k = 0; k < d.size(); ++k) d[k] = coeff(static_cast<unsigned>(k)) - o.coeff(static_cast<unsigned>(k));
  return StatePolynomial(std::move(d));
}

StatePolynomial StatePolynomial::scaled(const Rational& r) const {
  std::vector<Coefficient> s;
  s.reserve(coeffs_.size());
  for (const auto& c : coeffs_) s.push_back(r * c);
  return StatePolynomial(std::move(s));
}

Coefficient StatePolynomial::eval(const Coefficient& y) const {
  Coefficient acc;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * y + *it;
  return acc;
}

LinComb StatePolynomial::eval_lincomb(const LinComb& y, const MaxLen& max_len) const {
  if (coeffs_.empty()) return {};
  LinComb acc = LinComb::term(coeffs_[0], Word{});
  LinComb p;  // y^k, built up so squares can exploit symmetry
  for (std::size_t k = 1; k < coeffs_.size(); ++k) {
    p = k == 1 ? truncate(y, max_len) : lincomb_mul(p, y, max_len);
    if (coeffs_[k].is_zero()) continue;
    LinComb scaled = p;
    scaled.scale(coeffs_[k]);
    acc += scaled;
  }
  return acc;
}

unsigned Model::max_degree() const {
  unsigned q = 0;
  for (const auto& p : f) q = std::max(q, p.degree());
  return q;
}

Letter Model::letter_of(unsigned driver) const {
  if (driver_letters.empty()) return static_cast<Letter>(driver);
  return driver_letters[driver];
}

void Model::validate() const {
  if (n_drivers == 0) throw ConfigError("model: 'drivers' must be >= 1");
  if (f.size() != n_drivers)
    throw ConfigError("model: 'f' must list exactly one polynomial per driver");
  if (!driver_letters.empty() && driver_letters.size() != n_drivers)
    throw ConfigError("model: driver letter labels must match the driver count");
}

std::vector<Coefficient> taylor_recenter(const StatePolynomial& P, const Coefficient& y0) {
  std::vector<Coefficient> g;
  StatePolynomial d = P;
  unsigned q = P.degree();
  for (unsigned k = 0; k <= q; ++k) {
    Coefficient gk = d.eval(y0);
    gk *= Rational(Integer(1), factorial(k));
    g.push_back(std::move(gk));
    d = d.derivative();
  }
  return g;
}

QTable build_q_table(const Model& model) {
  model.validate();
  unsigned q = model.max_degree();
  QTable table;
  for (unsigned k = 0; k <= q; ++k) table[k] = LinComb();
  for (unsigned i = 0; i < model.n_drivers; ++i) {
    std::vector<Coefficient> g = taylor_recenter(model.f[i], model.y0);
    for (unsigned k = 0; k < g.size(); ++k)
      table[k].add_term(Word::single(model.letter_of(i)), g[k]);
  }
  return table;
}

StatePolynomial ito_to_stratonovich(const StatePolynomial& mu, const StatePolynomial& sigma) {
  return mu - (sigma.derivative() * sigma).scaled(Rational(1, 2));
}

}  // namespace stex
