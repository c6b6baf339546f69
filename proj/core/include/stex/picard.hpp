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

#include "stex/model.hpp"
#include "stex/qexpr.hpp"

namespace stex {

/// Picard iteration in compact Q-form:
///   Y(1)   = Q0
///   Y(r+1) = Q0 + sum_{k=1}^{q} Y(r)^k |> Qk
/// The result depends only on (R, q), never on the model, so it can be
/// persisted once and reused (see serialize_expr). Throws on R < 1.
Expr picard_q(unsigned R, unsigned q);

/// Direct Picard iteration, fully expanded in memory:
///   Y(0) = 0,  Y(r+1) = sum_i append(f_i(y0 + Y(r)), letter_i)
/// truncated to `max_len` at every step. This is the reference oracle the
/// pipeline is checked against.
LinComb picard_direct(const Model& model, unsigned R, const MaxLen& max_len = kUnbounded);

/// Reference evaluator: substitutes the Q-table into a Q expression and
/// expands everything in memory (products as shuffle products, |> as the
/// dendriform product), truncating as it goes. Bypasses the staged pipeline.
/// Throws if the expression references a Q index the table lacks.
LinComb qexpr_eval_in_memory(const Expr& e, const QTable& table,
                             const MaxLen& max_len = kUnbounded);

}  // namespace stex
