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
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>

namespace stex {

/// A driver index. Convention: 0 is deterministic time and >= 1 are Brownian
/// components when the model is stochastic, but any labeling works as long as
/// it is consistent within a model.
using Letter = std::uint8_t;

/// A finite sequence of driver letters indexing an iterated integral J^w.
/// The empty word is a valid, distinct value (the constant integral J^()).
///
/// Letters are stored one byte each in a std::string so that words up to the
/// SSO capacity never touch the heap; expansions are maps keyed by millions
/// of short words, so this matters.
class Word {
 public:
  Word() = default;
  Word(std::initializer_list<unsigned> letters) {
    data_.reserve(letters.size());
    for (unsigned l : letters) data_.push_back(static_cast<char>(l));
  }

  static Word single(Letter l) { return Word(std::string(1, static_cast<char>(l))); }

  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  Letter operator[](std::size_t i) const { return static_cast<Letter>(static_cast<unsigned char>(data_[i])); }
  Letter last() const { return (*this)[data_.size() - 1]; }

  /// The word with its last letter removed.
  Word drop_last() const { return Word(data_.substr(0, data_.size() - 1)); }

  void push_back(Letter l) { data_.push_back(static_cast<char>(l)); }

  bool operator==(const Word&) const = default;

  /// Canonical order: by length, then lexicographically on letters.
  friend bool word_less(const Word& a, const Word& b) {
    if (a.data_.size() != b.data_.size()) return a.data_.size() < b.data_.size();
    return a.data_ < b.data_;
  }

  /// "0,1,2"; the empty word renders as the empty string.
  std::string to_string() const;

  /// Parses a comma-separated letter list; "" yields the empty word.
  /// Throws ParseError (column is relative to `text`, offset by `col0`).
  static Word parse(std::string_view text, std::size_t line = 1, std::size_t col0 = 1);

 private:
  explicit Word(std::string data) : data_(std::move(data)) {}

  std::string data_;
};

struct WordOrder {
  bool operator()(const Word& a, const Word& b) const { return word_less(a, b); }
};

/// The append rule: integrating J^w against driver l yields J^{(w,l)}.
inline Word append(const Word& w, Letter l) {
  Word r = w;
  r.push_back(l);
  return r;
}

}  // namespace stex
