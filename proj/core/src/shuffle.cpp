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

#include "stex/shuffle.hpp"

#include <algorithm>
#include <vector>

namespace stex {
namespace {

// Visits every interleaving of a and b exactly once per slot pattern.
// Patterns are the rewrite closure of "a..ab..b" under ab -> ba, walked by
// std::next_permutation from the sorted pattern; distinct patterns may yield
// equal words, so multiplicities appear as repeated visits.
template <typename Visit>
void for_each_interleaving(const Word& a, const Word& b, Visit&& visit) {
  std::vector<char> pattern(a.size() + b.size(), 0);
  std::fill(pattern.end() - static_cast<std::ptrdiff_t>(b.size()), pattern.end(), 1);
  do {
    Word w;
    std::size_t ia = 0, ib = 0;
    for (char slot : pattern) w.push_back(slot ? b[ib++] : a[ia++]);
    visit(std::move(w));
  } while (std::next_permutation(pattern.begin(), pattern.end()));
}

inline void track(TermBudget* budget, std::size_t before, std::size_t after) {
  if (!budget) return;
  if (after > before)
    budget->add(after - before);
  else
    budget->remove(before - after);
}

// Emits c * shuffle(wa, wb), optionally appending `tail` to every resulting
// word. The interleavings of one pair are buffered (scratch words, not
// LinComb terms), sorted and grouped first so the comparatively expensive
// coefficient arithmetic runs once per distinct word instead of once per
// pattern.
template <typename Emit>
void shuffled_groups(const Word& wa, const Word& wb, const Coefficient& c, const Letter* tail,
                     Emit&& emit) {
  if (wa.empty() || wb.empty()) {
    const Word& w = wa.empty() ? wb : wa;
    emit(tail ? append(w, *tail) : w, c);
    return;
  }
  thread_local std::vector<Word> buffer;
  buffer.clear();
  for_each_interleaving(wa, wb, [&](Word w) { buffer.push_back(std::move(w)); });
  std::sort(buffer.begin(), buffer.end(), WordOrder{});
  for (std::size_t i = 0; i < buffer.size();) {
    std::size_t j = i + 1;
    while (j < buffer.size() && buffer[j] == buffer[i]) ++j;
    Coefficient scaled = c;
    if (j - i > 1) scaled *= Rational(static_cast<unsigned long>(j - i));
    emit(tail ? append(buffer[i], *tail) : buffer[i], scaled);
    i = j;
  }
}

void accumulate_shuffled(LinComb& r, const Word& wa, const Word& wb, const Coefficient& c,
                         const Letter* tail, TermBudget* budget) {
  std::size_t before = r.size();
  shuffled_groups(wa, wb, c, tail, [&](const Word& w, const Coefficient& cw) { r.add_term(w, cw); });
  track(budget, before, r.size());
}

}  // namespace

LinComb shuffle_recursive(const Word& a, const Word& b) {
  if (a.empty()) return LinComb::term(Coefficient(1), b);
  if (b.empty()) return LinComb::term(Coefficient(1), a);
  LinComb r = append_letter(shuffle_recursive(a, b.drop_last()), b.last());
  r += append_letter(shuffle_recursive(a.drop_last(), b), a.last());
  return r;
}

LinComb shuffle_iterative(const Word& a, const Word& b) {
  if (a.empty()) return LinComb::term(Coefficient(1), b);
  if (b.empty()) return LinComb::term(Coefficient(1), a);
  LinComb r;
  accumulate_shuffled(r, a, b, Coefficient(1), nullptr, nullptr);
  return r;
}

LinComb lincomb_mul(const LinComb& x, const LinComb& y, const MaxLen& max_len,
                    TermBudget* budget) {
  LinComb r;
  // A square is symmetric: off-diagonal pairs contribute twice.
  if (&x == &y || x == y) {
    for (auto ia = x.begin(); ia != x.end(); ++ia) {
      for (auto ib = ia; ib != x.end(); ++ib) {
        if (!within(max_len, ia->first.size() + ib->first.size())) continue;
        Coefficient c = ia->second * ib->second;
        if (ia != ib) c *= Rational(2);
        if (c.is_zero()) continue;
        accumulate_shuffled(r, ia->first, ib->first, c, nullptr, budget);
      }
    }
    return r;
  }
  for (const auto& [wa, ca] : x) {
    for (const auto& [wb, cb] : y) {
      if (!within(max_len, wa.size() + wb.size())) continue;
      Coefficient c = ca * cb;
      if (c.is_zero()) continue;
      accumulate_shuffled(r, wa, wb, c, nullptr, budget);
    }
  }
  return r;
}

LinComb lincomb_pow(const LinComb& x, unsigned k, const MaxLen& max_len, TermBudget* budget) {
  LinComb r = LinComb::unit();
  if (budget) budget->add(1);
  for (unsigned i = 0; i < k; ++i) {
    LinComb next = lincomb_mul(r, x, max_len, budget);
    if (budget) budget->remove(r.size());
    r = std::move(next);
  }
  return r;
}

LinComb ncp(const LinComb& x, const LinComb& y, const MaxLen& max_len, TermBudget* budget) {
  LinComb r;
  for (const auto& [wb, cb] : y) {
    if (wb.empty()) continue;  // J^a |> J^() = 0: integration against a constant
    Letter end = wb.last();
    Word body = wb.drop_last();
    for (const auto& [wa, ca] : x) {
      if (!within(max_len, wa.size() + wb.size())) continue;
      Coefficient c = ca * cb;
      if (c.is_zero()) continue;
      accumulate_shuffled(r, wa, body, c, &end, budget);
    }
  }
  return r;
}

void lincomb_mul_stream(const LinComb& x, const LinComb& y, const MaxLen& max_len,
                        const TermEmit& emit) {
  auto forward = [&](const Word& w, const Coefficient& c) { emit(w, c); };
  if (&x == &y || x == y) {
    for (auto ia = x.begin(); ia != x.end(); ++ia) {
      for (auto ib = ia; ib != x.end(); ++ib) {
        if (!within(max_len, ia->first.size() + ib->first.size())) continue;
        Coefficient c = ia->second * ib->second;
        if (ia != ib) c *= Rational(2);
        if (c.is_zero()) continue;
        shuffled_groups(ia->first, ib->first, c, nullptr, forward);
      }
    }
    return;
  }
  for (const auto& [wa, ca] : x) {
    for (const auto& [wb, cb] : y) {
      if (!within(max_len, wa.size() + wb.size())) continue;
      Coefficient c = ca * cb;
      if (c.is_zero()) continue;
      shuffled_groups(wa, wb, c, nullptr, forward);
    }
  }
}

void ncp_stream(const LinComb& x, const LinComb& y, const MaxLen& max_len, const TermEmit& emit) {
  auto forward = [&](const Word& w, const Coefficient& c) { emit(w, c); };
  for (const auto& [wb, cb] : y) {
    if (wb.empty()) continue;
    Letter end = wb.last();
    Word body = wb.drop_last();
    for (const auto& [wa, ca] : x) {
      if (!within(max_len, wa.size() + wb.size())) continue;
      Coefficient c = ca * cb;
      if (c.is_zero()) continue;
      shuffled_groups(wa, body, c, &end, forward);
    }
  }
}

}  // namespace stex
