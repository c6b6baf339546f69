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

#include <functional>

#include "stex/lincomb.hpp"

namespace stex {

/// Shuffle product by the integration-by-parts recursion
///   J^a J^b = append(J^a x J^{b-}, b_end) + append(J^{a-} x J^b, a_end),
/// with either word empty acting as the identity. Exponential in the word
/// lengths; kept as the reference algorithm and for benchmarking against the
/// iterative version.
LinComb shuffle_recursive(const Word& a, const Word& b);

/// Shuffle product by pattern enumeration: every interleaving of |a| a-slots
/// and |b| b-slots (the rewrite closure of "a..ab..b" under ab -> ba) is
/// generated once, the letters of a and b are substituted in order, and equal
/// words accumulate multiplicity. Identical output to shuffle_recursive.
LinComb shuffle_iterative(const Word& a, const Word& b);

/// Shuffle product of whole combinations: bilinear extension of the word
/// shuffle. Commutative and associative. Word pairs exceeding `max_len` are
/// skipped before any shuffle work happens.
LinComb lincomb_mul(const LinComb& x, const LinComb& y, const MaxLen& max_len = kUnbounded,
                    TermBudget* budget = nullptr);

/// k-fold lincomb_mul; k = 0 yields the unit 1*J^().
LinComb lincomb_pow(const LinComb& x, unsigned k, const MaxLen& max_len = kUnbounded,
                    TermBudget* budget = nullptr);

/// The dendriform half-product x |> y = "integrate x against y":
///   J^a |> J^b = append(J^a x J^{b-}, b_end)   for |b| >= 1,
///   J^a |> J^() = 0 (integration against a constant),
/// extended bilinearly. Non-commutative and non-associative; the two halves
/// sum to the shuffle: shuffle(a,b) = J^a |> J^b + J^b |> J^a for nonempty
/// a, b.
LinComb ncp(const LinComb& x, const LinComb& y, const MaxLen& max_len = kUnbounded,
            TermBudget* budget = nullptr);

/// Streaming variants for out-of-core consumers: terms of the product are
/// handed to `emit` (combined per word pair, but a word may be emitted more
/// than once across pairs) without materializing the result. The formal sum
/// of emitted terms equals the materialized product.
using TermEmit = std::function<void(Word, Coefficient)>;
void lincomb_mul_stream(const LinComb& x, const LinComb& y, const MaxLen& max_len,
                        const TermEmit& emit);
void ncp_stream(const LinComb& x, const LinComb& y, const MaxLen& max_len, const TermEmit& emit);

}  // namespace stex
