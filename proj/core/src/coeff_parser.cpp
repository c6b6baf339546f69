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

#include <cctype>
#include <optional>
#include <string>
#include <vector>

#include "stex/coefficient.hpp"
#include "stex/errors.hpp"
#include "stex/word.hpp"

namespace stex {
namespace {

// Recursive-descent parser for the coefficient grammar:
//
//   expr   := ['+'|'-'] term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := base ('^' UINT)?
//   base   := RATIONAL | SYMBOL | '(' expr ')'
//   RATIONAL := UINT ('/' UINT)?
//   SYMBOL := [a-z][a-z0-9]*
class CoeffParser {
 public:
  CoeffParser(std::string_view text, std::size_t line, std::size_t col0)
      : text_(text), line_(line), col_(col0) {}

  Coefficient parse() {
    skip_ws();
    if (at_end()) throw err("empty coefficient expression");
    Coefficient c = parse_expr();
    skip_ws();
    if (!at_end()) throw err(std::string("unexpected character '") + peek() + "'");
    return c;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) advance();
  }

  ParseError err(const std::string& msg) const { return ParseError(msg, line_, col_); }

  Coefficient parse_expr() {
    Coefficient acc;
    bool negative = false;
    skip_ws();
    if (!at_end() && (peek() == '+' || peek() == '-')) {
      negative = peek() == '-';
      advance();
    }
    acc = negative ? -parse_term() : parse_term();
    for (;;) {
      skip_ws();
      if (at_end() || (peek() != '+' && peek() != '-')) return acc;
      bool sub = peek() == '-';
      advance();
      Coefficient t = parse_term();
      if (sub)
        acc -= t;
      else
        acc += t;
    }
  }

  // Terms without parentheses (the canonical form) are assembled directly as
  // one (rational, monomial) pair; a parenthesized factor falls back to
  // general coefficient multiplication.
  Coefficient parse_term() {
    Rational rat(1);
    std::vector<std::pair<std::string, std::uint32_t>> symbols;
    std::optional<Coefficient> general;
    bool any_factor = false;
    for (;;) {
      skip_ws();
      if (at_end()) break;
      char c = peek();
      if (c == '(') {
        advance();
        Coefficient inner = parse_expr();
        skip_ws();
        if (at_end() || peek() != ')') throw err("expected ')'");
        advance();
        skip_ws();
        if (!at_end() && peek() == '^') {
          advance();
          inner = inner.pow(parse_uint("exponent"));
        }
        general = general ? *general * inner : inner;
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        Rational r = parse_rational();
        skip_ws();
        if (!at_end() && peek() == '^') {
          advance();
          unsigned e = parse_uint("exponent");
          Rational p(1);
          for (unsigned i = 0; i < e; ++i) p *= r;
          r = p;
        }
        rat *= r;
      } else if (c >= 'a' && c <= 'z') {
        std::string name = parse_symbol();
        std::uint32_t e = 1;
        skip_ws();
        if (!at_end() && peek() == '^') {
          advance();
          e = parse_uint("exponent");
        }
        symbols.emplace_back(std::move(name), e);
      } else {
        throw err(std::string("expected rational, symbol or '(', got '") + c + "'");
      }
      any_factor = true;
      skip_ws();
      if (at_end() || peek() != '*') break;
      advance();
    }
    if (!any_factor) throw err("expected rational, symbol or '('");
    Coefficient term(Monomial::from_factors(std::move(symbols)), rat);
    if (general) term *= *general;
    return term;
  }

  Rational parse_rational() {
    Integer num = parse_integer("numerator");
    skip_ws();
    if (!at_end() && peek() == '/') {
      advance();
      skip_ws();
      Integer den = parse_integer("denominator");
      if (den == 0) throw err("zero denominator");
      return Rational(num, den);
    }
    return Rational(num);
  }

  Integer parse_integer(const char* what) {
    skip_ws();
    if (at_end() || !std::isdigit(static_cast<unsigned char>(peek())))
      throw err(std::string("expected ") + what);
    std::string digits;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
      digits += peek();
      advance();
    }
    if (digits.size() <= 18) {
      unsigned long long v = 0;
      for (char c : digits) v = v * 10 + static_cast<unsigned long long>(c - '0');
      return Integer(v);
    }
    return Integer(digits);
  }

  unsigned parse_uint(const char* what) {
    Integer v = parse_integer(what);
    if (v > 1000000) throw err(std::string(what) + " out of range");
    return static_cast<unsigned>(v);
  }

  std::string parse_symbol() {
    std::string name(1, peek());
    advance();
    while (!at_end()) {
      char c = peek();
      if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) {
        name += c;
        advance();
      } else {
        break;
      }
    }
    return name;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_;
  std::size_t col_;
};

}  // namespace

Coefficient parse_coefficient(std::string_view text, std::size_t line, std::size_t col0) {
  return CoeffParser(text, line, col0).parse();
}

std::string Word::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < size(); ++i) {
    if (i) s += ',';
    s += std::to_string(static_cast<unsigned>((*this)[i]));
  }
  return s;
}

Word Word::parse(std::string_view text, std::size_t line, std::size_t col0) {
  Word w;
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  };
  skip_ws();
  if (pos == text.size()) return w;  // empty word
  for (;;) {
    skip_ws();
    std::size_t start = pos;
    unsigned long value = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      value = value * 10 + static_cast<unsigned long>(text[pos] - '0');
      if (value > 255) throw ParseError("letter out of range (max 255)", line, col0 + start);
      ++pos;
    }
    if (pos == start) throw ParseError("expected letter (decimal digit)", line, col0 + pos);
    w.push_back(static_cast<Letter>(value));
    skip_ws();
    if (pos == text.size()) return w;
    if (text[pos] != ',') throw ParseError("expected ',' between letters", line, col0 + pos);
    ++pos;
  }
}

}  // namespace stex
