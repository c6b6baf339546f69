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

#include "stex/lincomb.hpp"

#include <ostream>
#include <sstream>

#include "stex/errors.hpp"

namespace stex {

LinComb LinComb::term(Coefficient c, Word w) {
  LinComb x;
  if (!c.is_zero()) x.terms_.emplace(std::move(w), std::move(c));
  return x;
}

std::size_t LinComb::max_word_length() const {
  // Canonical order sorts by length first, so the longest word is last.
  return terms_.empty() ? 0 : terms_.rbegin()->first.size();
}

void LinComb::add_term(const Word& w, const Coefficient& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(w);
  if (it == terms_.end()) {
    terms_.emplace(w, c);
  } else {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

LinComb& LinComb::operator+=(const LinComb& o) {
  for (const auto& [w, c] : o.terms_) add_term(w, c);
  return *this;
}

LinComb LinComb::operator+(const LinComb& o) const {
  LinComb r = *this;
  r += o;
  return r;
}

void LinComb::scale(const Coefficient& c) {
  if (c.is_zero()) {
    terms_.clear();
    return;
  }
  if (c.is_one()) return;
  Terms scaled;
  for (const auto& [w, v] : terms_) scaled.emplace(w, v * c);
  terms_ = std::move(scaled);
}

LinComb truncate(const LinComb& x, const MaxLen& max_len) {
  if (!max_len) return x;
  LinComb r;
  for (const auto& [w, c] : x.terms()) {
    if (w.size() > *max_len) break;  // canonical order: longer words follow
    r.add_term(w, c);
  }
  return r;
}

LinComb append_letter(const LinComb& x, Letter l, const MaxLen& max_len) {
  LinComb r;
  for (const auto& [w, c] : x.terms()) {
    if (!within(max_len, w.size() + 1)) break;
    r.add_term(append(w, l), c);
  }
  return r;
}

void serialize_lincomb(const LinComb& x, std::ostream& out) {
  for (const auto& [w, c] : x.terms()) out << c.to_string() << " ; " << w.to_string() << "\n";
}

std::string serialize_lincomb(const LinComb& x) {
  std::ostringstream os;
  serialize_lincomb(x, os);
  return os.str();
}

std::pair<Word, Coefficient> parse_expansion_line(std::string_view line, std::size_t lineno) {
  std::size_t sep = line.find(';');
  if (sep == std::string_view::npos)
    throw ParseError("expected '<coefficient> ; <word>'", lineno, line.size() + 1);
  Coefficient c = parse_coefficient(line.substr(0, sep), lineno, 1);
  Word w = Word::parse(line.substr(sep + 1), lineno, sep + 2);
  return {std::move(w), std::move(c)};
}

LinComb parse_lincomb(std::string_view text, std::size_t line0) {
  LinComb x;
  std::size_t lineno = line0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line =
        eol == std::string_view::npos ? text.substr(pos) : text.substr(pos, eol - pos);
    bool blank = line.find_first_not_of(" \t\r") == std::string_view::npos;
    if (!blank) {
      auto [w, c] = parse_expansion_line(line, lineno);
      x.add_term(w, c);
    }
    if (eol == std::string_view::npos) break;
    pos = eol + 1;
    ++lineno;
  }
  return x;
}

}  // namespace stex
