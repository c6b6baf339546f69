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

#include "stex/mc.hpp"

#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

namespace stex {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::vector<Letter> word_letters(const Word& w) {
  std::set<Letter> seen;
  for (std::size_t i = 0; i < w.size(); ++i) seen.insert(w[i]);
  return {seen.begin(), seen.end()};
}

double horner(const std::vector<double>& coeffs, double y) {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * y + *it;
  return acc;
}

struct NumericField {
  std::vector<std::vector<double>> coeffs;  // per driver, ascending degree
  std::vector<Letter> letters;              // per driver
};

NumericField bind_model(const Model& model, const std::map<std::string, double>& bindings) {
  NumericField nf;
  for (unsigned i = 0; i < model.n_drivers; ++i) {
    std::vector<double> c;
    for (const Coefficient& coeff : model.f[i].coeffs())
      c.push_back(eval_coefficient(coeff, bindings));
    nf.coeffs.push_back(std::move(c));
    nf.letters.push_back(model.letter_of(i));
  }
  return nf;
}

}  // namespace

std::uint64_t subseed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed ^ splitmix64(index + 1));
}

DriverPaths DriverPaths::simulate(const std::vector<Letter>& letters,
                                  std::optional<Letter> time_letter, double T, std::size_t steps,
                                  std::uint64_t seed) {
  DriverPaths p;
  p.T = T;
  p.steps = steps;
  p.seed = seed;
  p.grid.resize(steps + 1);
  for (std::size_t j = 0; j <= steps; ++j)
    p.grid[j] = T * static_cast<double>(j) / static_cast<double>(steps);

  double sqrt_dt = std::sqrt(T / static_cast<double>(steps));
  for (Letter l : letters) {
    if (time_letter && l == *time_letter) {
      p.paths[l] = p.grid;
      continue;
    }
    // Each Brownian component gets its own deterministic stream.
    std::mt19937_64 rng(subseed(seed, 0x100 + l));
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> path(steps + 1);
    path[0] = 0.0;
    for (std::size_t j = 0; j < steps; ++j) path[j + 1] = path[j] + sqrt_dt * normal(rng);
    p.paths[l] = std::move(path);
  }
  return p;
}

const std::vector<double>& DriverPaths::path(Letter l) const {
  auto it = paths.find(l);
  if (it == paths.end())
    throw std::out_of_range("no sampled path for driver letter " + std::to_string(l));
  return it->second;
}

double iterated_integral_numeric(const DriverPaths& paths, const Word& w) {
  std::vector<double> prev(paths.steps + 1, 1.0);
  std::vector<double> cur(paths.steps + 1, 0.0);
  for (std::size_t k = 0; k < w.size(); ++k) {
    const std::vector<double>& x = paths.path(w[k]);
    cur[0] = 0.0;
    for (std::size_t j = 0; j < paths.steps; ++j)
      cur[j + 1] = cur[j] + 0.5 * (prev[j] + prev[j + 1]) * (x[j + 1] - x[j]);
    std::swap(prev, cur);
  }
  return prev[paths.steps];
}

McEstimate mc_expect_word(const Word& w, Letter time_letter, double T, std::size_t steps,
                          std::size_t samples, std::uint64_t seed) {
  std::vector<Letter> letters = word_letters(w);
  double mean = 0.0, m2 = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    DriverPaths paths = DriverPaths::simulate(letters, time_letter, T, steps, subseed(seed, s));
    double x = iterated_integral_numeric(paths, w);
    double delta = x - mean;
    mean += delta / static_cast<double>(s + 1);
    m2 += delta * (x - mean);
  }
  McEstimate e;
  e.estimate = mean;
  e.samples = samples;
  e.stderror = samples > 1
                   ? std::sqrt(m2 / static_cast<double>(samples - 1) / static_cast<double>(samples))
                   : 0.0;
  return e;
}

double eval_coefficient(const Coefficient& c, const std::map<std::string, double>& bindings) {
  double total = 0.0;
  for (const auto& [mono, rat] : c.terms()) {
    double v = static_cast<double>(rat);
    for (const auto& [sym, exp] : mono.factors()) {
      auto it = bindings.find(sym);
      if (it == bindings.end()) throw std::runtime_error("unbound parameter '" + sym + "'");
      v *= std::pow(it->second, static_cast<double>(exp));
    }
    total += v;
  }
  return total;
}

double eval_expansion_numeric(const LinComb& x, const DriverPaths& paths,
                              const std::map<std::string, double>& bindings) {
  double total = 0.0;
  for (const auto& [w, c] : x)
    total += eval_coefficient(c, bindings) * iterated_integral_numeric(paths, w);
  return total;
}

double stratonovich_solve_on(const Model& model, const std::map<std::string, double>& bindings,
                             const DriverPaths& paths) {
  NumericField nf = bind_model(model, bindings);
  double y = eval_coefficient(model.y0, bindings);
  for (std::size_t j = 0; j < paths.steps; ++j) {
    double drift = 0.0;
    for (unsigned i = 0; i < nf.letters.size(); ++i) {
      const std::vector<double>& x = paths.path(nf.letters[i]);
      drift += horner(nf.coeffs[i], y) * (x[j + 1] - x[j]);
    }
    double y_pred = y + drift;
    double correction = 0.0;
    for (unsigned i = 0; i < nf.letters.size(); ++i) {
      const std::vector<double>& x = paths.path(nf.letters[i]);
      correction +=
          0.5 * (horner(nf.coeffs[i], y) + horner(nf.coeffs[i], y_pred)) * (x[j + 1] - x[j]);
    }
    y += correction;
  }
  return y;
}

double stratonovich_solve(const Model& model, const std::map<std::string, double>& bindings,
                          double T, std::size_t steps, std::uint64_t seed) {
  std::vector<Letter> letters;
  for (unsigned i = 0; i < model.n_drivers; ++i) letters.push_back(model.letter_of(i));
  DriverPaths paths = DriverPaths::simulate(letters, model.time_driver, T, steps, seed);
  return stratonovich_solve_on(model, bindings, paths);
}

McEstimate mc_solve_increment(const Model& model, const std::map<std::string, double>& bindings,
                              double T, std::size_t steps, std::size_t samples,
                              std::uint64_t seed) {
  std::vector<Letter> letters;
  for (unsigned i = 0; i < model.n_drivers; ++i) letters.push_back(model.letter_of(i));
  double y0 = eval_coefficient(model.y0, bindings);
  double mean = 0.0, m2 = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    DriverPaths paths =
        DriverPaths::simulate(letters, model.time_driver, T, steps, subseed(seed, s));
    double x = stratonovich_solve_on(model, bindings, paths) - y0;
    double delta = x - mean;
    mean += delta / static_cast<double>(s + 1);
    m2 += delta * (x - mean);
  }
  McEstimate e;
  e.estimate = mean;
  e.samples = samples;
  e.stderror = samples > 1
                   ? std::sqrt(m2 / static_cast<double>(samples - 1) / static_cast<double>(samples))
                   : 0.0;
  return e;
}

}  // namespace stex
