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

#include "stex/qexpr.hpp"

#include <cctype>
#include <stdexcept>

#include "stex/errors.hpp"

namespace stex {

Expr expr_one() { return Expr{}; }

Expr expr_q(unsigned k) {
  Expr e;
  e.kind = ExprKind::QAtom;
  e.q_index = k;
  return e;
}

Expr expr_j(Coefficient c, Word w) {
  Expr e;
  e.kind = ExprKind::JAtom;
  e.coeff = std::move(c);
  e.word = std::move(w);
  return e;
}

Expr expr_sum(std::vector<Expr> children) {
  if (children.empty()) throw std::invalid_argument("expr_sum: no children");
  if (children.size() == 1) return std::move(children.front());
  Expr e;
  e.kind = ExprKind::Sum;
  e.children = std::move(children);
  return e;
}

Expr expr_prod(std::vector<Expr> children) {
  if (children.empty()) throw std::invalid_argument("expr_prod: no children");
  if (children.size() == 1) return std::move(children.front());
  Expr e;
  e.kind = ExprKind::Prod;
  e.children = std::move(children);
  return e;
}

Expr expr_pow(Expr base, unsigned exponent) {
  if (exponent == 0) return expr_one();
  if (exponent == 1) return base;
  Expr e;
  e.kind = ExprKind::Pow;
  e.exponent = exponent;
  e.children.push_back(std::move(base));
  return e;
}

Expr expr_ncp(Expr left, Expr right) {
  Expr e;
  e.kind = ExprKind::Ncp;
  e.children.push_back(std::move(left));
  e.children.push_back(std::move(right));
  return e;
}

bool expr_contains(const Expr& e, ExprKind kind) {
  if (e.kind == kind) return true;
  for (const Expr& c : e.children)
    if (expr_contains(c, kind)) return true;
  return false;
}

namespace {

void serialize_into(const Expr& e, std::string& out) {
  switch (e.kind) {
    case ExprKind::One:
      out += '1';
      return;
    case ExprKind::QAtom:
      out += 'Q';
      out += std::to_string(e.q_index);
      return;
    case ExprKind::JAtom:
      if (!e.coeff.is_one()) {
        out += '(';
        out += e.coeff.to_string();
        out += ")*";
      }
      out += "J[";
      out += e.word.to_string();
      out += ']';
      return;
    case ExprKind::Sum:
    case ExprKind::Prod: {
      out += e.kind == ExprKind::Sum ? "(+" : "(*";
      for (const Expr& c : e.children) {
        out += ' ';
        serialize_into(c, out);
      }
      out += ')';
      return;
    }
    case ExprKind::Pow:
      out += "(^ ";
      serialize_into(e.children[0], out);
      out += ' ';
      out += std::to_string(e.exponent);
      out += ')';
      return;
    case ExprKind::Ncp:
      out += "(> ";
      serialize_into(e.children[0], out);
      out += ' ';
      serialize_into(e.children[1], out);
      out += ')';
      return;
  }
}

class ExprParser {
 public:
  ExprParser(std::string_view text, std::size_t line) : text_(text), line_(line) {}

  Expr parse() {
    Expr e = parse_node();
    skip_ws();
    if (pos_ != text_.size()) throw err("trailing characters after expression");
    return e;
  }

 private:
  ParseError err(const std::string& msg) const { return ParseError(msg, line_, pos_ + 1); }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }

  void expect(char c) {
    if (at_end() || peek() != c) throw err(std::string("expected '") + c + "'");
    ++pos_;
  }

  unsigned parse_uint() {
    if (at_end() || !std::isdigit(static_cast<unsigned char>(peek())))
      throw err("expected integer");
    unsigned long v = 0;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
      v = v * 10 + static_cast<unsigned long>(peek() - '0');
      if (v > 1000000) throw err("integer out of range");
      ++pos_;
    }
    return static_cast<unsigned>(v);
  }

  Expr parse_jatom(Coefficient c) {
    expect('J');
    expect('[');
    std::size_t close = text_.find(']', pos_);
    if (close == std::string_view::npos) throw err("unterminated 'J['");
    Word w = Word::parse(text_.substr(pos_, close - pos_), line_, pos_ + 1);
    pos_ = close + 1;
    return expr_j(std::move(c), std::move(w));
  }

  Expr parse_node() {
    skip_ws();
    if (at_end()) throw err("expected expression");
    char c = peek();
    if (c == 'Q') {
      ++pos_;
      return expr_q(parse_uint());
    }
    if (c == 'J') return parse_jatom(Coefficient(1));
    if (c == '1') {
      ++pos_;
      return expr_one();
    }
    if (c != '(') throw err(std::string("unexpected character '") + c + "'");

    // '(' either opens an operator node "(op e1 e2 ...)" or parenthesizes
    // the coefficient of a J atom "(coeff)*J[...]".
    if (pos_ + 1 < text_.size()) {
      char op = text_[pos_ + 1];
      if (op == '+' || op == '*' || op == '^' || op == '>') return parse_operator();
    }
    return parse_coeff_atom();
  }

  Expr parse_operator() {
    expect('(');
    char op = peek();
    ++pos_;
    if (op == '^') {
      Expr base = parse_node();
      skip_ws();
      unsigned k = parse_uint();
      if (k < 1) throw err("power exponent must be >= 1");
      skip_ws();
      expect(')');
      return expr_pow(std::move(base), k);
    }
    if (op == '>') {
      Expr left = parse_node();
      Expr right = parse_node();
      skip_ws();
      expect(')');
      return expr_ncp(std::move(left), std::move(right));
    }
    std::vector<Expr> children;
    for (;;) {
      skip_ws();
      if (at_end()) throw err("unterminated operator node");
      if (peek() == ')') {
        ++pos_;
        break;
      }
      children.push_back(parse_node());
    }
    if (children.size() < 2) throw err("operator node needs at least two children");
    return op == '+' ? expr_sum(std::move(children)) : expr_prod(std::move(children));
  }

  Expr parse_coeff_atom() {
    // Matching ')' for the coefficient parenthesis; coefficients contain no
    // nested unbalanced parens by grammar.
    std::size_t depth = 0, i = pos_;
    for (; i < text_.size(); ++i) {
      if (text_[i] == '(') ++depth;
      if (text_[i] == ')' && --depth == 0) break;
    }
    if (i >= text_.size()) throw err("unterminated coefficient parenthesis");
    Coefficient c = parse_coefficient(text_.substr(pos_ + 1, i - pos_ - 1), line_, pos_ + 2);
    pos_ = i + 1;
    expect('*');
    skip_ws();
    if (at_end() || peek() != 'J') throw err("expected 'J[' after coefficient");
    return parse_jatom(std::move(c));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_;
};

}  // namespace

std::string serialize_expr(const Expr& e) {
  std::string out;
  serialize_into(e, out);
  return out;
}

Expr parse_expr(std::string_view text, std::size_t line) { return ExprParser(text, line).parse(); }

}  // namespace stex
