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

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "stex/model.hpp"

namespace stex {

// Floating point lives in this module only; the algebra stays exact. The
// midpoint (Stratonovich) discretization is used for both the iterated
// integrals and the SDE solver so the two stay mutually consistent.

/// Sampled driver paths on a uniform grid: the time letter carries the
/// identity path, every other letter an independent Brownian motion with
/// increment variance T/steps. Reproducible from the seed.
struct DriverPaths {
  double T = 1.0;
  std::size_t steps = 0;
  std::uint64_t seed = 0;
  std::vector<double> grid;                     // t_0 = 0 .. t_steps = T
  std::map<Letter, std::vector<double>> paths;  // letter -> X on the grid

  static DriverPaths simulate(const std::vector<Letter>& letters,
                              std::optional<Letter> time_letter, double T, std::size_t steps,
                              std::uint64_t seed);

  const std::vector<double>& path(Letter l) const;
};

/// Deterministic per-sample sub-seed so results are independent of execution
/// order across parallel samples.
std::uint64_t subseed(std::uint64_t seed, std::uint64_t index);

/// Midpoint discretization of the nested integral:
///   I_k(t_{j+1}) = I_k(t_j) + (I_{k-1}(t_j) + I_{k-1}(t_{j+1}))/2 * dX^(w_k)_j
/// with I_0 = 1; the empty word yields 1.
double iterated_integral_numeric(const DriverPaths& paths, const Word& w);

struct McEstimate {
  double estimate = 0.0;
  double stderror = 0.0;
  std::size_t samples = 0;
};

/// Sample mean and standard error of J^w over independent driver paths.
McEstimate mc_expect_word(const Word& w, Letter time_letter, double T, std::size_t steps,
                          std::size_t samples, std::uint64_t seed);

/// Evaluates a coefficient numerically; throws naming any unbound symbol.
double eval_coefficient(const Coefficient& c, const std::map<std::string, double>& bindings);

/// Evaluates an expansion on one sample path: sum of coeff(theta) * I(word).
double eval_expansion_numeric(const LinComb& x, const DriverPaths& paths,
                              const std::map<std::string, double>& bindings);

/// Heun predictor-corrector solve of dY = sum_i f_i(Y) dX^(i), consistent
/// with the Stratonovich reading. Returns Y_T.
double stratonovich_solve(const Model& model, const std::map<std::string, double>& bindings,
                          double T, std::size_t steps, std::uint64_t seed);
double stratonovich_solve_on(const Model& model, const std::map<std::string, double>& bindings,
                             const DriverPaths& paths);

/// Mean and standard error of Y_T - Y_0 over independent paths.
McEstimate mc_solve_increment(const Model& model, const std::map<std::string, double>& bindings,
                              double T, std::size_t steps, std::size_t samples,
                              std::uint64_t seed);

}  // namespace stex
