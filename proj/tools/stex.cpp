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

// Batch front end: expansion jobs, expectations, shuffle/ncp calculators,
// the shuffle benchmark and Monte Carlo validation.
//
// Exit codes: 0 success, 1 usage error, 2 config/parse error, 3 validation
// failure (MC z-threshold exceeded, memory term cap hit).

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stex/config.hpp"
#include "stex/errors.hpp"
#include "stex/expectation.hpp"
#include "stex/mc.hpp"
#include "stex/picard.hpp"
#include "stex/pipeline.hpp"
#include "stex/shuffle.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitConfig = 2;
constexpr int kExitValidation = 3;

struct ValidationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

stex::Word parse_word_arg(const std::string& text) {
  try {
    return stex::Word::parse(text);
  } catch (const stex::ParseError& ex) {
    throw stex::ConfigError("malformed word '" + text + "': " + ex.what());
  }
}

stex::MaxLen parse_max_len(const std::string& text) {
  if (text == "unbounded") return stex::kUnbounded;
  try {
    std::size_t pos = 0;
    unsigned long v = std::stoul(text, &pos);
    if (pos == text.size() && v >= 1) return static_cast<std::size_t>(v);
  } catch (...) {
  }
  throw stex::ConfigError("--max-word-length must be an integer >= 1 or \"unbounded\"");
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed) {
  if (seed) return *seed;
  std::random_device rd;
  std::uint64_t drawn = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  std::cerr << "seed: " << drawn << " (drawn from entropy; pass --seed to reproduce)\n";
  return drawn;
}

std::map<std::string, double> parse_bindings(const std::vector<std::string>& params) {
  std::map<std::string, double> bindings;
  for (const std::string& p : params) {
    std::size_t eq = p.find('=');
    if (eq == std::string::npos || eq == 0)
      throw stex::ConfigError("--param expects name=value, got '" + p + "'");
    try {
      bindings[p.substr(0, eq)] = std::stod(p.substr(eq + 1));
    } catch (...) {
      throw stex::ConfigError("--param '" + p + "': bad numeric value");
    }
  }
  return bindings;
}

int cmd_expand(const std::string& config_path, const std::optional<unsigned>& workers,
               const std::optional<std::string>& workdir,
               const std::optional<std::string>& max_len,
               const std::optional<std::size_t>& term_cap, bool keep_intermediate,
               const std::optional<std::string>& output,
               const std::optional<unsigned>& iterations) {
  stex::RunConfig run = stex::load_config(config_path);
  if (workers) run.workers = *workers;
  if (workdir) run.workdir = *workdir;
  if (max_len) run.max_word_length = parse_max_len(*max_len);
  if (output) run.output = *output;
  if (iterations) run.picard_iterations = *iterations;

  stex::StageConfig cfg = run.stage_config();
  if (term_cap) cfg.memory_term_cap = *term_cap;
  cfg.keep_intermediate = keep_intermediate;

  stex::PipelineSummary s =
      stex::run_pipeline(run.model, run.picard_iterations, cfg, run.output);
  std::cout << "terms: " << s.distinct_words << "\n"
            << "max word length: " << s.max_word_length << "\n"
            << "peak live terms: " << s.peak_live_terms << "\n"
            << "wall time: " << s.wall_seconds << " s\n"
            << "output: " << s.output.string() << "\n";
  return kExitOk;
}

int cmd_expect(const std::string& file, const std::string& time_symbol, unsigned time_letter) {
  std::ifstream in(file);
  if (!in) throw stex::ConfigError("cannot open expansion file " + file);
  stex::TimePolynomial p =
      stex::expect_expansion_stream(in, static_cast<stex::Letter>(time_letter));
  std::cout << p.to_string(time_symbol) << "\n";
  return kExitOk;
}

int cmd_shuffle(const std::string& a, const std::string& b, const std::string& algo) {
  stex::Word wa = parse_word_arg(a), wb = parse_word_arg(b);
  stex::LinComb r =
      algo == "recursive" ? stex::shuffle_recursive(wa, wb) : stex::shuffle_iterative(wa, wb);
  std::cout << stex::serialize_lincomb(r);
  return kExitOk;
}

int cmd_ncp(const std::string& a, const std::string& b) {
  stex::Word wa = parse_word_arg(a), wb = parse_word_arg(b);
  stex::LinComb r = stex::ncp(stex::LinComb::term(stex::Coefficient(1), wa),
                              stex::LinComb::term(stex::Coefficient(1), wb));
  std::cout << stex::serialize_lincomb(r);
  return kExitOk;
}

int cmd_picard_q(unsigned R, unsigned q, const std::optional<std::string>& output) {
  std::string text = stex::serialize_expr(stex::picard_q(R, q)) + "\n";
  if (output) {
    std::ofstream out(*output, std::ios::out | std::ios::trunc);
    if (!out) throw stex::ConfigError("cannot write " + *output);
    out << text;
  } else {
    std::cout << text;
  }
  return kExitOk;
}

int cmd_bench_shuffle(unsigned max_length, unsigned trials, std::optional<std::uint64_t> seed_opt,
                      unsigned alphabet, const std::optional<std::string>& output) {
  std::uint64_t seed = resolve_seed(seed_opt);
  std::ostream* out = &std::cout;
  std::ofstream file;
  if (output) {
    file.open(*output, std::ios::out | std::ios::trunc);
    if (!file) throw stex::ConfigError("cannot write " + *output);
    out = &file;
  }

  using clock = std::chrono::steady_clock;
  *out << "total_length,trials,mean_ratio,mean_recursive_us,mean_iterative_us\n";
  for (unsigned total = 2; total <= max_length; ++total) {
    std::mt19937_64 rng(stex::subseed(seed, total));
    std::uniform_int_distribution<unsigned> split(1, total - 1);
    std::uniform_int_distribution<unsigned> letter(0, alphabet - 1);
    double ratio_sum = 0.0, rec_us = 0.0, iter_us = 0.0;
    for (unsigned t = 0; t < trials; ++t) {
      unsigned la = split(rng);
      stex::Word a, b;
      for (unsigned i = 0; i < la; ++i) a.push_back(static_cast<stex::Letter>(letter(rng)));
      for (unsigned i = 0; i < total - la; ++i) b.push_back(static_cast<stex::Letter>(letter(rng)));

      auto t0 = clock::now();
      stex::LinComb r1 = stex::shuffle_recursive(a, b);
      auto t1 = clock::now();
      stex::LinComb r2 = stex::shuffle_iterative(a, b);
      auto t2 = clock::now();
      if (r1 != r2) throw std::logic_error("shuffle algorithms disagree");

      double rec = std::chrono::duration<double, std::micro>(t1 - t0).count();
      double ite = std::chrono::duration<double, std::micro>(t2 - t1).count();
      ratio_sum += rec / std::max(ite, 1e-3);
      rec_us += rec;
      iter_us += ite;
    }
    double n = static_cast<double>(trials);
    *out << total << ',' << trials << ',' << ratio_sum / n << ',' << rec_us / n << ','
         << iter_us / n << "\n";
  }
  return kExitOk;
}

void report_check(const std::string& label, double estimate, double stderror, double closed,
                  bool& all_ok) {
  double z;
  if (stderror > 0.0) {
    z = std::abs(estimate - closed) / stderror;
  } else {
    // Deterministic estimate: require near-exact agreement.
    z = std::abs(estimate - closed) <= 1e-6 * std::max(1.0, std::abs(closed))
            ? 0.0
            : std::numeric_limits<double>::infinity();
  }
  bool ok = z <= 4.0;
  all_ok = all_ok && ok;
  std::cout << label << ": estimate " << estimate << ", stderr " << stderror << ", closed-form "
            << closed << ", |z| " << z << (ok ? "" : "  EXCEEDS 4") << "\n";
}

int cmd_mc_check(const std::optional<std::string>& word_text, bool full,
                 const std::optional<std::string>& config_path,
                 const std::vector<std::string>& params, double T, std::size_t steps,
                 std::size_t samples, std::optional<std::uint64_t> seed_opt,
                 unsigned time_letter) {
  std::uint64_t seed = resolve_seed(seed_opt);
  bool all_ok = true;

  if (word_text) {
    stex::Word w = parse_word_arg(*word_text);
    stex::Letter tl = static_cast<stex::Letter>(time_letter);
    stex::McEstimate e = stex::mc_expect_word(w, tl, T, steps, samples, seed);
    double closed = 0.0;
    if (auto m = stex::expect_word(w, tl))
      closed = static_cast<double>(m->value_coefficient()) * std::pow(T, m->q_exp);
    report_check("word " + w.to_string(), e.estimate, e.stderror, closed, all_ok);
  }

  if (full) {
    if (!config_path) throw stex::ConfigError("--full requires --config");
    stex::RunConfig run = stex::load_config(*config_path);
    std::map<std::string, double> bindings = parse_bindings(params);

    stex::LinComb expansion =
        stex::picard_direct(run.model, run.picard_iterations, run.max_word_length);
    stex::Letter tl = run.model.time_driver ? *run.model.time_driver : stex::Letter{0};
    stex::TimePolynomial poly = stex::expect_expansion(expansion, tl);
    double closed = 0.0;
    for (const auto& [power, coeff] : poly.terms())
      closed += stex::eval_coefficient(coeff, bindings) * std::pow(T, power);

    stex::McEstimate e = stex::mc_solve_increment(run.model, bindings, T, steps, samples, seed);
    report_check("full model (R=" + std::to_string(run.picard_iterations) + ")", e.estimate,
                 e.stderror, closed, all_ok);
  }

  if (!word_text && !full) throw stex::ConfigError("mc-check needs --word and/or --full");
  if (!all_ok) throw ValidationFailure("MC estimate out of tolerance (|z| > 4)");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic Taylor expansions of polynomial differential equations"};
  app.require_subcommand(1);

  // expand
  auto* expand = app.add_subcommand("expand", "Run the staged expansion pipeline on a model");
  std::string expand_config;
  std::optional<unsigned> expand_workers, expand_iterations;
  std::optional<std::string> expand_workdir, expand_maxlen, expand_output;
  std::optional<std::size_t> expand_cap;
  bool expand_keep = false;
  expand->add_option("--config", expand_config, "Model configuration file (JSON)")->required();
  expand->add_option("--workers", expand_workers, "Override worker count");
  expand->add_option("--workdir", expand_workdir, "Override working directory");
  expand->add_option("--max-word-length", expand_maxlen,
                     "Override maximum word length (integer or \"unbounded\")");
  expand->add_option("--memory-term-cap", expand_cap,
                     "Maximum live terms per worker before erroring");
  expand->add_flag("--keep-intermediate", expand_keep, "Keep stage work files and shards");
  expand->add_option("--output", expand_output, "Override output file");
  expand->add_option("--iterations", expand_iterations, "Override Picard iteration count");

  // expect
  auto* expect = app.add_subcommand("expect", "Exact expectation of an expansion file");
  std::string expect_file, expect_symbol = "T";
  unsigned expect_letter = 0;
  expect->add_option("file", expect_file, "Expansion file")->required();
  expect->add_option("--time-symbol", expect_symbol, "Symbol for the time horizon (default T)");
  expect->add_option("--time-letter", expect_letter, "Driver letter that is time (default 0)");

  // shuffle
  auto* shuffle = app.add_subcommand("shuffle", "Shuffle product of two words");
  std::string shuffle_a, shuffle_b, shuffle_algo = "iterative";
  shuffle->add_option("word_a", shuffle_a, "First word, comma-separated letters (\"\" = empty)")
      ->required();
  shuffle->add_option("word_b", shuffle_b, "Second word")->required();
  shuffle->add_option("--algo", shuffle_algo, "Algorithm: iterative (default) or recursive")
      ->check(CLI::IsMember({"iterative", "recursive"}));

  // ncp
  auto* ncp_cmd = app.add_subcommand("ncp", "Dendriform product J^a |> J^b");
  std::string ncp_a, ncp_b;
  ncp_cmd->add_option("word_a", ncp_a, "Left word")->required();
  ncp_cmd->add_option("word_b", ncp_b, "Right word")->required();

  // picard-q
  auto* picardq = app.add_subcommand("picard-q", "Model-independent Picard Q-expression");
  unsigned pq_R = 1, pq_q = 2;
  std::optional<std::string> pq_output;
  picardq->add_option("-R,--iterations", pq_R, "Picard iterations (>= 1)")->required();
  picardq->add_option("-q,--degree", pq_q, "Maximum polynomial degree")->required();
  picardq->add_option("--output", pq_output, "Write to file instead of stdout");

  // bench-shuffle
  auto* bench = app.add_subcommand("bench-shuffle", "Recursive vs iterative shuffle timings");
  unsigned bench_maxlen = 12, bench_trials = 1000, bench_alphabet = 3;
  std::optional<std::uint64_t> bench_seed;
  std::optional<std::string> bench_output;
  bench->add_option("--max-length", bench_maxlen, "Largest total word length (default 12)");
  bench->add_option("--trials", bench_trials, "Random pairs per length (default 1000)");
  bench->add_option("--seed", bench_seed, "RNG seed (drawn from entropy when omitted)");
  bench->add_option("--alphabet", bench_alphabet, "Number of distinct letters (default 3)");
  bench->add_option("--output", bench_output, "CSV output file (default stdout)");

  // mc-check
  auto* mc = app.add_subcommand("mc-check", "Monte Carlo validation of closed forms");
  std::optional<std::string> mc_word, mc_config;
  bool mc_full = false;
  std::vector<std::string> mc_params;
  double mc_T = 1.0;
  std::size_t mc_steps = 1024, mc_samples = 10000;
  std::optional<std::uint64_t> mc_seed;
  unsigned mc_time_letter = 0;
  mc->add_option("--word", mc_word, "Check E J^w for one word");
  mc->add_flag("--full", mc_full, "Check a whole model expansion against the solver");
  mc->add_option("--config", mc_config, "Model configuration (for --full)");
  mc->add_option("--param", mc_params, "Numeric parameter binding name=value (repeatable)");
  mc->add_option("-T,--horizon", mc_T, "Time horizon (default 1)");
  mc->add_option("--steps", mc_steps, "Grid steps per path (default 1024)");
  mc->add_option("--samples", mc_samples, "Sample paths (default 10000)");
  mc->add_option("--seed", mc_seed, "RNG seed (drawn from entropy when omitted)");
  mc->add_option("--time-letter", mc_time_letter, "Driver letter that is time (default 0)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*expand)
      return cmd_expand(expand_config, expand_workers, expand_workdir, expand_maxlen, expand_cap,
                        expand_keep, expand_output, expand_iterations);
    if (*expect) return cmd_expect(expect_file, expect_symbol, expect_letter);
    if (*shuffle) return cmd_shuffle(shuffle_a, shuffle_b, shuffle_algo);
    if (*ncp_cmd) return cmd_ncp(ncp_a, ncp_b);
    if (*picardq) return cmd_picard_q(pq_R, pq_q, pq_output);
    if (*bench)
      return cmd_bench_shuffle(bench_maxlen, bench_trials, bench_seed, bench_alphabet,
                               bench_output);
    if (*mc)
      return cmd_mc_check(mc_word, mc_full, mc_config, mc_params, mc_T, mc_steps, mc_samples,
                          mc_seed, mc_time_letter);
  } catch (const ValidationFailure& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitValidation;
  } catch (const stex::TermCapError& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitValidation;
  } catch (const stex::ConfigError& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitConfig;
  } catch (const stex::ParseError& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitConfig;
  }
  return kExitUsage;
}
