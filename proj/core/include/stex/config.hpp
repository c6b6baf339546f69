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

#include <filesystem>
#include <iosfwd>

#include "stex/model.hpp"
#include "stex/pipeline.hpp"

namespace stex {

/// A full expansion job: the model plus run parameters.
struct RunConfig {
  Model model;
  unsigned picard_iterations = 1;
  MaxLen max_word_length = kUnbounded;
  unsigned workers = 1;
  std::filesystem::path workdir = "work";
  std::filesystem::path output = "expansion.terms";

  StageConfig stage_config() const {
    StageConfig cfg;
    cfg.workers = workers;
    cfg.workdir = workdir;
    cfg.max_word_length = max_word_length;
    return cfg;
  }
};

/// Loads a JSON model configuration:
///
///   {
///     "drivers": 2,
///     "time_driver": 0,
///     "y0": "0",
///     "f": [["a", "-a"], ["0", "0", "b"]],
///     "picard_iterations": 4,
///     "max_word_length": "unbounded",
///     "workers": 2,
///     "workdir": "work",
///     "output": "expansion.terms"
///   }
///
/// "f" lists one polynomial per driver as coefficient expression strings by
/// ascending degree in y. "time_driver" and "max_word_length" are optional;
/// everything else is required. Throws ConfigError naming the offending key.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(std::istream& in, const std::string& origin);

}  // namespace stex
