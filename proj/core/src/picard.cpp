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

#include "stex/picard.hpp"

#include <stdexcept>

namespace stex {

Expr picard_q(unsigned R, unsigned q) {
  if (R < 1) throw std::invalid_argument("picard_q: iteration count must be >= 1");
  Expr y = expr_q(0);
  for (unsigned r = 2; r <= R; ++r) {
    std::vector<Expr> terms;
    terms.push_back(expr_q(0));  // Y^0 |> Q0 simplified to Q0 at construction
    for (unsigned k = 1; k <= q; ++k) terms.push_back(expr_ncp(expr_pow(y, k), expr_q(k)));
    y = expr_sum(std::move(terms));
  }
  return y;
}

LinComb picard_direct(const Model& model, unsigned R, const MaxLen& max_len) {
  model.validate();
  LinComb y0_term = LinComb::term(model.y0, Word{});
  LinComb increment;  // Y_{0,T}(0) = 0
  for (unsigned r = 0; r < R; ++r) {
    LinComb value = y0_term + increment;  // f is evaluated at Y_0 + Y_{0,s}(r)
    LinComb next;
    for (unsigned i = 0; i < model.n_drivers; ++i) {
      LinComb fi = model.f[i].eval_lincomb(value, max_len);
      next += append_letter(fi, model.letter_of(i), max_len);
    }
    increment = std::move(next);
  }
  return increment;
}

LinComb qexpr_eval_in_memory(const Expr& e, const QTable& table, const MaxLen& max_len) {
  switch (e.kind) {
    case ExprKind::One:
      return LinComb::unit();
    case ExprKind::QAtom: {
      auto it = table.find(e.q_index);
      if (it == table.end())
        throw std::out_of_range("Q-table has no entry for Q" + std::to_string(e.q_index));
      return truncate(it->second, max_len);
    }
    case ExprKind::JAtom:
      return truncate(LinComb::term(e.coeff, e.word), max_len);
    case ExprKind::Sum: {
      LinComb r;
      for (const Expr& c : e.children) r += qexpr_eval_in_memory(c, table, max_len);
      return r;
    }
    case ExprKind::Prod: {
      LinComb r = qexpr_eval_in_memory(e.children[0], table, max_len);
      for (std::size_t i = 1; i < e.children.size(); ++i)
        r = lincomb_mul(r, qexpr_eval_in_memory(e.children[i], table, max_len), max_len);
      return r;
    }
    case ExprKind::Pow:
      return lincomb_pow(qexpr_eval_in_memory(e.children[0], table, max_len), e.exponent,
                         max_len);
    case ExprKind::Ncp:
      return ncp(qexpr_eval_in_memory(e.children[0], table, max_len),
                 qexpr_eval_in_memory(e.children[1], table, max_len), max_len);
  }
  throw std::logic_error("unreachable expression kind");
}

}  // namespace stex
