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

#include "stex/config.hpp"

#include <fstream>

#include <json.hpp>

#include "stex/errors.hpp"

namespace stex {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& key, const std::string& what) {
  throw ConfigError("config: '" + key + "' " + what);
}

long require_int(const json& doc, const std::string& key, long min_value) {
  if (!doc.contains(key)) fail(key, "is required");
  const json& v = doc.at(key);
  if (!v.is_number_integer()) fail(key, "must be an integer");
  long n = v.get<long>();
  if (n < min_value) fail(key, "must be >= " + std::to_string(min_value));
  return n;
}

std::string require_string(const json& doc, const std::string& key) {
  if (!doc.contains(key)) fail(key, "is required");
  const json& v = doc.at(key);
  if (!v.is_string()) fail(key, "must be a string");
  return v.get<std::string>();
}

Coefficient coefficient_field(const std::string& key, const std::string& text) {
  try {
    return parse_coefficient(text);
  } catch (const ParseError& ex) {
    fail(key, std::string("is not a valid coefficient expression: ") + ex.what());
  }
}

}  // namespace

RunConfig parse_config(std::istream& in, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& ex) {
    throw ConfigError("config " + origin + ": " + ex.what());
  }
  if (!doc.is_object()) throw ConfigError("config " + origin + ": expected a JSON object");

  RunConfig cfg;
  long drivers = require_int(doc, "drivers", 1);
  if (drivers > 256) fail("drivers", "must be <= 256 (letters are one byte)");
  cfg.model.n_drivers = static_cast<unsigned>(drivers);

  if (doc.contains("time_driver")) {
    long t = require_int(doc, "time_driver", 0);
    if (t >= drivers) fail("time_driver", "must name one of the drivers");
    cfg.model.time_driver = static_cast<Letter>(t);
  }

  cfg.model.y0 = coefficient_field("y0", require_string(doc, "y0"));

  if (!doc.contains("f")) fail("f", "is required");
  const json& f = doc.at("f");
  if (!f.is_array() || f.size() != static_cast<std::size_t>(drivers))
    fail("f", "must be an array with one polynomial per driver");
  for (std::size_t i = 0; i < f.size(); ++i) {
    const json& poly = f[i];
    if (!poly.is_array() || poly.empty())
      fail("f", "entry " + std::to_string(i) + " must be a non-empty array of coefficients");
    std::vector<Coefficient> coeffs;
    for (std::size_t k = 0; k < poly.size(); ++k) {
      if (!poly[k].is_string())
        fail("f", "entry " + std::to_string(i) + " coefficient " + std::to_string(k) +
                      " must be a string");
      coeffs.push_back(coefficient_field(
          "f[" + std::to_string(i) + "][" + std::to_string(k) + "]", poly[k].get<std::string>()));
    }
    cfg.model.f.emplace_back(std::move(coeffs));
  }

  cfg.picard_iterations = static_cast<unsigned>(require_int(doc, "picard_iterations", 1));

  if (doc.contains("max_word_length")) {
    const json& v = doc.at("max_word_length");
    if (v.is_string()) {
      if (v.get<std::string>() != "unbounded")
        fail("max_word_length", "must be an integer or \"unbounded\"");
      cfg.max_word_length = kUnbounded;
    } else if (v.is_number_integer() && v.get<long>() >= 1) {
      cfg.max_word_length = static_cast<std::size_t>(v.get<long>());
    } else {
      fail("max_word_length", "must be an integer >= 1 or \"unbounded\"");
    }
  }

  cfg.workers = static_cast<unsigned>(require_int(doc, "workers", 1));
  cfg.workdir = require_string(doc, "workdir");
  cfg.output = require_string(doc, "output");

  cfg.model.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  return parse_config(in, path.string());
}

}  // namespace stex
