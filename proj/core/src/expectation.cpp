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

#include "stex/expectation.hpp"

#include <istream>

namespace stex {

std::optional<ExpectationMonomial> expect_word(const Word& w, Letter time_letter) {
  // Greedy right-to-left scan: time letters count toward the t power, two
  // adjacent equal Brownian letters form a pair worth 1/2 and one t power,
  // and any other configuration has expectation zero.
  unsigned pairs = 0, zeros = 0;
  std::size_t i = w.size();
  while (i > 0) {
    if (w[i - 1] == time_letter) {
      ++zeros;
      i -= 1;
    } else if (i > 1 && w[i - 1] == w[i - 2] && w[i - 2] != time_letter) {
      ++pairs;
      i -= 2;
    } else {
      return std::nullopt;
    }
  }
  ExpectationMonomial m;
  m.p = Rational(Integer(1), Integer(1) << pairs);
  m.q_exp = pairs + zeros;
  return m;
}

void TimePolynomial::add(unsigned power, const Coefficient& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(power);
  if (it == terms_.end()) {
    terms_.emplace(power, c);
  } else {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Coefficient TimePolynomial::coefficient(unsigned power) const {
  auto it = terms_.find(power);
  return it == terms_.end() ? Coefficient() : it->second;
}

std::string TimePolynomial::to_string(const std::string& time_symbol) const {
  if (terms_.empty()) return "0";
  std::string s;
  for (const auto& [power, coeff] : terms_) {
    std::string body;
    bool negative = false;
    if (coeff.term_count() == 1) {
      // Fold a single-term coefficient into the T monomial: "-1/2*a^2*T^2".
      body = coeff.to_string();
      if (body.front() == '-') {
        negative = true;
        body.erase(0, 1);
      }
      if (power > 0) {
        if (body == "1")
          body.clear();
        else
          body += '*';
      }
    } else {
      body = "(" + coeff.to_string() + ")";
      if (power > 0) body += '*';
    }
    if (power > 0) {
      body += time_symbol;
      if (power > 1) body += "^" + std::to_string(power);
    }
    if (s.empty()) {
      if (negative) s += '-';
    } else {
      s += negative ? '-' : '+';
    }
    s += body;
  }
  return s;
}

TimePolynomial expect_expansion(const LinComb& x, Letter time_letter) {
  TimePolynomial p;
  for (const auto& [w, c] : x) {
    auto e = expect_word(w, time_letter);
    if (!e) continue;
    Coefficient scaled = c;
    scaled *= e->value_coefficient();
    p.add(e->q_exp, scaled);
  }
  return p;
}

TimePolynomial expect_expansion_stream(std::istream& in, Letter time_letter) {
  TimePolynomial p;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto [w, c] = parse_expansion_line(line, lineno);
    auto e = expect_word(w, time_letter);
    if (!e) continue;
    c *= e->value_coefficient();
    p.add(e->q_exp, c);
  }
  return p;
}

}  // namespace stex
