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
#include <stdexcept>
#include <string>

namespace stex {

/// Malformed textual input (coefficient expressions, expansion lines, work
/// records). Carries a 1-based line/column position.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string message, std::size_t line, std::size_t column)
      : std::runtime_error("parse error at " + std::to_string(line) + ":" +
                           std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Invalid or inconsistent model configuration; the message names the key.
class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A single pipeline record materialized more terms than the configured
/// memory cap allows. Signals the cap is too small for the run, never a
/// silent truncation.
class TermCapError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace stex
