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

#include "stex/coefficient.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "stex/errors.hpp"

namespace stex {

Integer factorial(unsigned n) {
  Integer r = 1;
  for (unsigned i = 2; i <= n; ++i) r *= i;
  return r;
}

Integer binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  Integer r = 1;
  for (unsigned i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

namespace {

std::string integer_to_string(const Integer& v) {
  // Fast path for machine-word values; .str() goes through slow formatting.
  static const Integer kMin = std::numeric_limits<long long>::min();
  static const Integer kMax = std::numeric_limits<long long>::max();
  if (v >= kMin && v <= kMax) return std::to_string(v.convert_to<long long>());
  return v.str();
}

}  // namespace

std::string rational_to_string(const Rational& r) {
  std::string s = integer_to_string(numerator(r));
  if (denominator(r) != 1) {
    s += '/';
    s += integer_to_string(denominator(r));
  }
  return s;
}

Monomial Monomial::symbol(std::string name, std::uint32_t exp) {
  Monomial m;
  if (exp > 0) m.factors_.emplace_back(std::move(name), exp);
  return m;
}

Monomial Monomial::from_factors(std::vector<std::pair<std::string, std::uint32_t>> factors) {
  std::sort(factors.begin(), factors.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  Monomial m;
  for (auto& [sym, exp] : factors) {
    if (exp == 0) continue;
    if (!m.factors_.empty() && m.factors_.back().first == sym)
      m.factors_.back().second += exp;
    else
      m.factors_.emplace_back(std::move(sym), exp);
  }
  return m;
}

unsigned Monomial::degree() const {
  unsigned d = 0;
  for (const auto& [sym, exp] : factors_) d += exp;
  return d;
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial r;
  r.factors_.reserve(factors_.size() + o.factors_.size());
  auto a = factors_.begin(), b = o.factors_.begin();
  while (a != factors_.end() && b != o.factors_.end()) {
    if (a->first < b->first) {
      r.factors_.push_back(*a++);
    } else if (b->first < a->first) {
      r.factors_.push_back(*b++);
    } else {
      r.factors_.emplace_back(a->first, a->second + b->second);
      ++a;
      ++b;
    }
  }
  r.factors_.insert(r.factors_.end(), a, factors_.end());
  r.factors_.insert(r.factors_.end(), b, o.factors_.end());
  return r;
}

bool monomial_less(const Monomial& a, const Monomial& b) {
  unsigned da = a.degree(), db = b.degree();
  if (da != db) return da < db;
  auto ia = a.factors_.begin(), ib = b.factors_.begin();
  while (ia != a.factors_.end() && ib != b.factors_.end()) {
    if (ia->first != ib->first) return ia->first < ib->first;
    // Same symbol: the higher power of the earlier symbol comes first,
    // so a^2 precedes a*b.
    if (ia->second != ib->second) return ia->second > ib->second;
    ++ia;
    ++ib;
  }
  return false;  // equal degree and a common prefix exhausts both
}

std::string Monomial::to_string() const {
  std::string s;
  for (const auto& [sym, exp] : factors_) {
    if (!s.empty()) s += '*';
    s += sym;
    if (exp != 1) {
      s += '^';
      s += std::to_string(exp);
    }
  }
  return s;
}

Coefficient::Coefficient(Rational r) {
  if (r != 0) terms_.emplace(Monomial::unit(), std::move(r));
}

Coefficient::Coefficient(Monomial m, Rational r) {
  if (r != 0) terms_.emplace(std::move(m), std::move(r));
}

Coefficient Coefficient::symbol(std::string name) {
  return Coefficient(Monomial::symbol(std::move(name)), Rational(1));
}

bool Coefficient::is_one() const {
  return terms_.size() == 1 && terms_.begin()->first.is_unit() && terms_.begin()->second == 1;
}

bool Coefficient::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_unit());
}

Rational Coefficient::constant_value() const {
  if (terms_.empty()) return Rational(0);
  if (!is_constant()) throw std::logic_error("coefficient is not constant: " + to_string());
  return terms_.begin()->second;
}

void Coefficient::add_term(const Monomial& m, const Rational& r) {
  if (r == 0) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, r);
  } else {
    it->second += r;
    if (it->second == 0) terms_.erase(it);
  }
}

Coefficient& Coefficient::operator+=(const Coefficient& o) {
  for (const auto& [m, r] : o.terms_) add_term(m, r);
  return *this;
}

Coefficient& Coefficient::operator-=(const Coefficient& o) {
  for (const auto& [m, r] : o.terms_) add_term(m, -r);
  return *this;
}

Coefficient Coefficient::operator+(const Coefficient& o) const {
  Coefficient r = *this;
  r += o;
  return r;
}

Coefficient Coefficient::operator-(const Coefficient& o) const {
  Coefficient r = *this;
  r -= o;
  return r;
}

Coefficient Coefficient::operator-() const {
  Coefficient r;
  for (const auto& [m, v] : terms_) r.terms_.emplace(m, -v);
  return r;
}

Coefficient Coefficient::operator*(const Coefficient& o) const {
  Coefficient r;
  for (const auto& [ma, va] : terms_)
    for (const auto& [mb, vb] : o.terms_) r.add_term(ma * mb, va * vb);
  return r;
}

Coefficient& Coefficient::operator*=(const Coefficient& o) {
  *this = *this * o;
  return *this;
}

Coefficient& Coefficient::operator*=(const Rational& r) {
  if (r == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= r;
  return *this;
}

Coefficient operator*(const Rational& r, const Coefficient& c) {
  Coefficient out = c;
  out *= r;
  return out;
}

Coefficient Coefficient::pow(unsigned k) const {
  Coefficient r(Rational(1));
  for (unsigned i = 0; i < k; ++i) r *= *this;
  return r;
}

std::string Coefficient::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (const auto& [m, r] : terms_) {
    bool negative = r < 0;
    if (s.empty()) {
      if (negative) s += '-';
    } else {
      s += negative ? '-' : '+';
    }
    Rational mag = negative ? Rational(-r) : r;
    if (m.is_unit()) {
      s += rational_to_string(mag);
    } else {
      if (mag != 1) {
        s += rational_to_string(mag);
        s += '*';
      }
      s += m.to_string();
    }
  }
  return s;
}

}  // namespace stex
