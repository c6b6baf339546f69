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
#include <string>
#include <string_view>
#include <vector>

#include "stex/lincomb.hpp"

namespace stex {

/// Node kinds of the placeholder expression tree.
///
/// Picard iteration in Q-form only ever produces QAtom/Sum/Prod/Pow/Ncp;
/// the pipeline additionally uses JAtom once the Q placeholders have been
/// substituted by their model values. Both the Q objects and the product |>
/// stay symbolic until the pipeline instantiates them.
enum class ExprKind { One, QAtom, JAtom, Sum, Prod, Pow, Ncp };

struct Expr {
  ExprKind kind = ExprKind::One;
  unsigned q_index = 0;      // QAtom
  Coefficient coeff;         // JAtom scalar
  Word word;                 // JAtom word
  unsigned exponent = 0;     // Pow (always >= 2 after normalization)
  std::vector<Expr> children;  // Sum/Prod: >= 2; Pow: 1; Ncp: 2

  bool operator==(const Expr&) const = default;
};

Expr expr_one();
Expr expr_q(unsigned k);
Expr expr_j(Coefficient c, Word w);
/// Flattens to the single child when given one; requires >= 1 element.
Expr expr_sum(std::vector<Expr> children);
Expr expr_prod(std::vector<Expr> children);
/// expr_pow(e, 1) simplifies to e; expr_pow(e, 0) is the unit.
Expr expr_pow(Expr base, unsigned exponent);
Expr expr_ncp(Expr left, Expr right);

bool expr_contains(const Expr& e, ExprKind kind);

/// Prefix s-expression grammar, one expression per line:
///   1                      the unit
///   Q<k>                   Q placeholder, e.g. Q2
///   J[l1,l2,...]           iterated-integral atom with coefficient 1
///   (<coeff>)*J[l1,...]    atom scaled by a coefficient expression
///   (+ e1 e2 ...)          sum
///   (* e1 e2 ...)          product (shuffle, still symbolic)
///   (^ e k)                integer power, k >= 1
///   (> e1 e2)              the dendriform placeholder e1 |> e2
std::string serialize_expr(const Expr& e);

/// Throws ParseError; `line` offsets reported positions.
Expr parse_expr(std::string_view text, std::size_t line = 1);

}  // namespace stex
