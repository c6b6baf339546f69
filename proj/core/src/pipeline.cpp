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

#include "stex/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <deque>
#include <fstream>
#include <functional>
#include <queue>
#include <thread>

#include "stex/errors.hpp"
#include "stex/picard.hpp"
#include "stex/shuffle.hpp"

namespace stex {
namespace {

namespace fs = std::filesystem;

constexpr std::size_t kMaxRounds = 100000;
constexpr std::size_t kDefaultRunTerms = std::size_t{1} << 20;

struct RecordRef {
  std::size_t file = 0;
  std::uint64_t offset = 0;
};

std::vector<RecordRef> scan_records(const std::vector<fs::path>& files) {
  std::vector<RecordRef> refs;
  for (std::size_t fi = 0; fi < files.size(); ++fi) {
    std::ifstream in(files[fi]);
    if (!in) throw std::runtime_error("cannot open work file " + files[fi].string());
    std::string line;
    for (;;) {
      auto pos = in.tellg();
      if (!std::getline(in, line)) break;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      refs.push_back({fi, static_cast<std::uint64_t>(pos)});
    }
  }
  return refs;
}

// Runs `work(worker_id, record_index, line)` over every record of `files`.
// Workers claim records through a single shared atomic counter, read the
// read-only input through their own streams and never touch any other shared
// state; all output goes through per-worker files owned by the callback.
void parallel_for_records(const std::vector<fs::path>& files, const std::vector<RecordRef>& refs,
                          unsigned workers,
                          const std::function<void(unsigned, std::size_t, const std::string&)>& work) {
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned wid = 0; wid < workers; ++wid) {
    pool.emplace_back([&, wid] {
      try {
        std::vector<std::ifstream> streams(files.size());
        std::string line;
        for (;;) {
          std::size_t i = next.fetch_add(1);
          if (i >= refs.size()) break;
          const RecordRef& ref = refs[i];
          std::ifstream& in = streams[ref.file];
          if (!in.is_open()) {
            in.open(files[ref.file]);
            if (!in) throw std::runtime_error("cannot open work file " + files[ref.file].string());
          }
          in.clear();
          in.seekg(static_cast<std::streamoff>(ref.offset));
          if (!std::getline(in, line))
            throw std::runtime_error("cannot read record " + std::to_string(i) + " from " +
                                     files[ref.file].string());
          while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
          work(wid, i, line);
        }
      } catch (...) {
        errors[wid] = std::current_exception();
        next.store(refs.size());  // poison the claim counter so peers drain
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// A per-worker output file, written under a .tmp name and atomically renamed
// on finalize so partially written shards are never mistaken for results.
class ShardWriter {
 public:
  ShardWriter() = default;

  void open(fs::path final_path) {
    final_path_ = std::move(final_path);
    tmp_path_ = final_path_;
    tmp_path_ += ".tmp";
    out_.open(tmp_path_, std::ios::out | std::ios::trunc);
    if (!out_) throw std::runtime_error("cannot create shard " + tmp_path_.string());
  }

  void write_line(const std::string& s) {
    out_ << s << '\n';
    lines_ += 1 + static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
    if (!out_) throw std::runtime_error("write failed on shard " + tmp_path_.string());
  }

  std::size_t lines() const { return lines_; }
  const fs::path& path() const { return final_path_; }

  void finalize() {
    out_.flush();
    out_.close();
    fs::rename(tmp_path_, final_path_);
  }

 private:
  fs::path final_path_, tmp_path_;
  std::ofstream out_;
  std::size_t lines_ = 0;
};

void write_manifest(const fs::path& manifest, const std::vector<ShardWriter>& shards) {
  std::ofstream out(manifest, std::ios::out | std::ios::trunc);
  for (const auto& s : shards) out << s.path().filename().string() << ' ' << s.lines() << '\n';
}

Expr parse_record(const std::string& line, const std::string& stage, std::size_t index) {
  try {
    return parse_expr(line);
  } catch (const std::exception& ex) {
    throw std::runtime_error(stage + ": record " + std::to_string(index) + ": " + ex.what());
  }
}

// Path to the shallowest node of either rewritable kind, BFS order. Empty
// optional when the record is already a monomial.
std::optional<std::vector<std::size_t>> find_shallowest_rewritable(const Expr& root) {
  std::deque<std::pair<const Expr*, std::vector<std::size_t>>> queue;
  queue.emplace_back(&root, std::vector<std::size_t>{});
  while (!queue.empty()) {
    auto [node, path] = std::move(queue.front());
    queue.pop_front();
    if (node->kind == ExprKind::Sum || node->kind == ExprKind::Pow) return path;
    for (std::size_t i = 0; i < node->children.size(); ++i) {
      auto child_path = path;
      child_path.push_back(i);
      queue.emplace_back(&node->children[i], std::move(child_path));
    }
  }
  return std::nullopt;
}

Expr* node_at(Expr& root, const std::vector<std::size_t>& path, std::size_t depth) {
  Expr* n = &root;
  for (std::size_t i = 0; i < depth; ++i) n = &n->children[path[i]];
  return n;
}

// One rewrite step of the expand stages, handling the shallowest Sum/Pow
// first (the firstPlus/firstPower heuristic). A power unrolls into a
// repeated product and the record is re-queued. A sum is distributed upward
// through its ancestors until it reaches the root, which then splits into
// one record per summand; deeper sums and powers inside the summands wait
// for later rounds, so no record is ever fully expanded in one pass.
std::vector<Expr> rewrite_step(Expr record, std::vector<std::size_t> path) {
  Expr* target = node_at(record, path, path.size());

  if (target->kind == ExprKind::Pow) {
    Expr base = std::move(target->children[0]);
    std::vector<Expr> copies(target->exponent, base);
    *target = expr_prod(std::move(copies));
    std::vector<Expr> out;
    out.push_back(std::move(record));
    return out;
  }

  while (!path.empty()) {
    Expr* parent = node_at(record, path, path.size() - 1);
    std::size_t idx = path.back();
    Expr sum_node = std::move(parent->children[idx]);
    std::vector<Expr> alternatives;
    alternatives.reserve(sum_node.children.size());
    for (Expr& summand : sum_node.children) {
      Expr variant = *parent;
      variant.children[idx] = std::move(summand);
      alternatives.push_back(std::move(variant));
    }
    *parent = expr_sum(std::move(alternatives));
    path.pop_back();
  }

  if (record.kind == ExprKind::Sum) return std::move(record.children);
  std::vector<Expr> out;
  out.push_back(std::move(record));
  return out;
}

// Worklist driver shared by stages 1 and 3. Each round, records that are
// already monomials go to the worker's final shard and everything else gets
// one rewrite step and is re-queued; rounds repeat until nothing was
// re-queued (the paper's changeHappened loop).
ShardSet run_expand_stage(const std::string& stage, std::vector<fs::path> inputs,
                          const StageConfig& cfg, StageStats* stats) {
  std::vector<ShardWriter> finals(cfg.workers);
  for (unsigned k = 0; k < cfg.workers; ++k)
    finals[k].open(cfg.workdir / (stage + "_worker" + std::to_string(k) + ".terms"));

  std::vector<fs::path> round_files;  // re-queue files of all past rounds
  std::size_t round = 0;
  bool counted_input = false;

  while (true) {
    if (++round > kMaxRounds) throw std::runtime_error(stage + ": rewrite did not terminate");
    auto refs = scan_records(inputs);
    if (stats && !counted_input) {
      stats->records_in = refs.size();
      counted_input = true;
    }
    if (refs.empty()) break;

    std::vector<ShardWriter> requeues(cfg.workers);
    std::vector<std::size_t> requeued(cfg.workers, 0);
    for (unsigned k = 0; k < cfg.workers; ++k)
      requeues[k].open(cfg.workdir / (stage + "_round" + std::to_string(round) + "_worker" +
                                      std::to_string(k) + ".requeue"));

    parallel_for_records(inputs, refs, cfg.workers,
                         [&](unsigned wid, std::size_t idx, const std::string& line) {
                           Expr record = parse_record(line, stage, idx);
                           auto path = find_shallowest_rewritable(record);
                           if (!path) {
                             finals[wid].write_line(serialize_expr(record));
                             return;
                           }
                           for (const Expr& r : rewrite_step(std::move(record), *path)) {
                             requeues[wid].write_line(serialize_expr(r));
                             ++requeued[wid];
                           }
                         });

    inputs.clear();
    for (unsigned k = 0; k < cfg.workers; ++k) {
      requeues[k].finalize();
      if (requeued[k] > 0) {
        inputs.push_back(requeues[k].path());
        round_files.push_back(requeues[k].path());
      } else {
        fs::remove(requeues[k].path());
      }
    }
    if (inputs.empty()) break;
  }

  ShardSet out;
  out.stage = stage;
  for (auto& w : finals) {
    w.finalize();
    out.shards.push_back(w.path());
  }
  out.manifest = cfg.workdir / (stage + ".manifest");
  write_manifest(out.manifest, finals);
  if (stats) {
    stats->rounds = round;
    stats->records_out = 0;
    for (const auto& w : finals) stats->records_out += w.lines();
  }
  if (!cfg.keep_intermediate)
    for (const auto& p : round_files) fs::remove(p);
  return out;
}

// Single-pass map stage: applies `fn` to every record; output goes through
// the worker's own shard writer.
ShardSet run_map_stage(const std::string& stage, const std::vector<fs::path>& inputs,
                       const StageConfig& cfg, StageStats* stats,
                       const std::function<void(unsigned, std::size_t, const std::string&,
                                                ShardWriter&)>& fn) {
  std::vector<ShardWriter> finals(cfg.workers);
  for (unsigned k = 0; k < cfg.workers; ++k)
    finals[k].open(cfg.workdir / (stage + "_worker" + std::to_string(k) + ".terms"));

  auto refs = scan_records(inputs);
  if (stats) stats->records_in = refs.size();
  parallel_for_records(inputs, refs, cfg.workers,
                       [&](unsigned wid, std::size_t idx, const std::string& line) {
                         fn(wid, idx, line, finals[wid]);
                       });

  ShardSet out;
  out.stage = stage;
  for (auto& w : finals) {
    w.finalize();
    out.shards.push_back(w.path());
  }
  out.manifest = cfg.workdir / (stage + ".manifest");
  write_manifest(out.manifest, finals);
  if (stats) {
    stats->rounds = 1;
    stats->records_out = 0;
    for (const auto& w : finals) stats->records_out += w.lines();
  }
  return out;
}

Expr lincomb_to_expr(const LinComb& x) {
  std::vector<Expr> atoms;
  for (const auto& [w, c] : x) atoms.push_back(expr_j(c, w));
  return expr_sum(std::move(atoms));
}

// nullopt when the substituted record is identically zero.
std::optional<Expr> substitute_q_expr(const Expr& e, const QTable& table) {
  switch (e.kind) {
    case ExprKind::QAtom: {
      auto it = table.find(e.q_index);
      if (it == table.end())
        throw std::runtime_error("no Q-table value for Q" + std::to_string(e.q_index));
      if (it->second.is_zero()) return std::nullopt;
      return lincomb_to_expr(it->second);
    }
    case ExprKind::One:
    case ExprKind::JAtom:
      return e;
    case ExprKind::Sum:
    case ExprKind::Prod:
    case ExprKind::Ncp: {
      std::vector<Expr> children;
      children.reserve(e.children.size());
      for (const Expr& c : e.children) {
        auto sub = substitute_q_expr(c, table);
        if (!sub) {
          // A zero factor annihilates products and |>; zero summands drop.
          if (e.kind != ExprKind::Sum) return std::nullopt;
          continue;
        }
        children.push_back(std::move(*sub));
      }
      if (children.empty()) return std::nullopt;
      if (e.kind == ExprKind::Sum) return expr_sum(std::move(children));
      if (e.kind == ExprKind::Prod) return expr_prod(std::move(children));
      Expr r = expr_ncp(std::move(children[0]), std::move(children[1]));
      return r;
    }
    case ExprKind::Pow: {
      auto base = substitute_q_expr(e.children[0], table);
      if (!base) return std::nullopt;
      return expr_pow(std::move(*base), e.exponent);
    }
  }
  throw std::logic_error("unreachable expression kind");
}

// Bottom-up instantiation of one J-monomial, with live-term accounting.
LinComb eval_monomial(const Expr& e, const MaxLen& max_len, TermBudget& budget) {
  switch (e.kind) {
    case ExprKind::One: {
      budget.add(1);
      return LinComb::unit();
    }
    case ExprKind::JAtom: {
      LinComb r = truncate(LinComb::term(e.coeff, e.word), max_len);
      budget.add(r.size());
      return r;
    }
    case ExprKind::Prod: {
      LinComb r = eval_monomial(e.children[0], max_len, budget);
      for (std::size_t i = 1; i < e.children.size(); ++i) {
        LinComb y = eval_monomial(e.children[i], max_len, budget);
        LinComb m = lincomb_mul(r, y, max_len, &budget);
        budget.remove(r.size() + y.size());
        r = std::move(m);
      }
      return r;
    }
    case ExprKind::Ncp: {
      LinComb l = eval_monomial(e.children[0], max_len, budget);
      LinComb rr = eval_monomial(e.children[1], max_len, budget);
      LinComb m = ncp(l, rr, max_len, &budget);
      budget.remove(l.size() + rr.size());
      return m;
    }
    case ExprKind::QAtom:
      throw std::runtime_error("record still contains a Q placeholder");
    case ExprKind::Sum:
    case ExprKind::Pow:
      throw std::runtime_error("record is not a monomial");
  }
  throw std::logic_error("unreachable expression kind");
}

// Streams the value of a record without materializing its outermost product
// or |>: inner factors are evaluated bottom-up (and counted), the top of the
// tree is forwarded term by term. A word may be emitted more than once; the
// aggregate stage combines like terms anyway.
void stream_monomial(const Expr& e, const MaxLen& max_len, TermBudget& budget,
                     const TermEmit& emit) {
  switch (e.kind) {
    case ExprKind::One:
      emit(Word{}, Coefficient(1));
      return;
    case ExprKind::JAtom:
      if (within(max_len, e.word.size()) && !e.coeff.is_zero()) emit(e.word, e.coeff);
      return;
    case ExprKind::Prod: {
      LinComb l = eval_monomial(e.children[0], max_len, budget);
      for (std::size_t i = 1; i + 1 < e.children.size(); ++i) {
        LinComb y = eval_monomial(e.children[i], max_len, budget);
        LinComb m = lincomb_mul(l, y, max_len, &budget);
        budget.remove(l.size() + y.size());
        l = std::move(m);
      }
      LinComb r = eval_monomial(e.children.back(), max_len, budget);
      lincomb_mul_stream(l, r, max_len, emit);
      budget.remove(l.size() + r.size());
      return;
    }
    case ExprKind::Ncp: {
      LinComb right = eval_monomial(e.children[1], max_len, budget);
      stream_monomial(e.children[0], max_len, budget, [&](Word w, Coefficient c) {
        ncp_stream(LinComb::term(std::move(c), std::move(w)), right, max_len, emit);
      });
      budget.remove(right.size());
      return;
    }
    case ExprKind::QAtom:
      throw std::runtime_error("record still contains a Q placeholder");
    case ExprKind::Sum:
    case ExprKind::Pow:
      throw std::runtime_error("record is not a monomial");
  }
  throw std::logic_error("unreachable expression kind");
}

// Accumulates streamed terms and spills to the shard whenever the buffer
// reaches the flush threshold, so one record never pins more than a bounded
// number of live terms regardless of its expanded size.
class FlushingSink {
 public:
  FlushingSink(ShardWriter& shard, TermBudget& budget, std::size_t threshold)
      : shard_(shard), budget_(budget), threshold_(threshold) {}

  void add(Word w, const Coefficient& c) {
    std::size_t before = buffer_.size();
    buffer_.add_term(w, c);
    if (buffer_.size() > before)
      budget_.add(buffer_.size() - before);
    else
      budget_.remove(before - buffer_.size());
    if (buffer_.size() >= threshold_) flush();
  }

  void flush() {
    for (const auto& [w, c] : buffer_) shard_.write_line(c.to_string() + " ; " + w.to_string());
    budget_.remove(buffer_.size());
    buffer_ = LinComb();
  }

 private:
  LinComb buffer_;
  ShardWriter& shard_;
  TermBudget& budget_;
  std::size_t threshold_;
};

// Expansion lines are carried as (word key, verbatim text); coefficients are
// only parsed when equal words actually need summing. Our own shards are
// already canonical, so singleton lines pass through byte-identically.
struct RawTerm {
  Word word;
  std::string line;
};

Word word_key_of_line(const std::string& line, std::size_t lineno) {
  std::size_t sep = line.find(';');
  if (sep == std::string::npos)
    throw ParseError("expected '<coefficient> ; <word>'", lineno, line.size() + 1);
  return Word::parse(std::string_view(line).substr(sep + 1), lineno, sep + 2);
}

Coefficient coefficient_of_line(const std::string& line, std::size_t lineno) {
  std::size_t sep = line.find(';');
  return parse_coefficient(std::string_view(line).substr(0, sep), lineno, 1);
}

struct AggregateInput {
  fs::path path;
  std::ifstream stream;
  std::size_t lineno = 0;
  RawTerm term;
  bool done = false;

  bool advance() {
    std::string line;
    for (;;) {
      if (!std::getline(stream, line)) {
        done = true;
        return false;
      }
      ++lineno;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      term.word = word_key_of_line(line, lineno);
      term.line = std::move(line);
      return true;
    }
  }
};

}  // namespace

ShardSet expand_monomials_q(const fs::path& in_file, const StageConfig& cfg, StageStats* stats) {
  return run_expand_stage("stage1", {in_file}, cfg, stats);
}

ShardSet substitute_q(const ShardSet& in, const QTable& table, const StageConfig& cfg,
                      StageStats* stats) {
  return run_map_stage("stage2", in.shards, cfg, stats,
                       [&](unsigned, std::size_t idx, const std::string& line, ShardWriter& out) {
                         Expr record = parse_record(line, "stage2", idx);
                         try {
                           auto sub = substitute_q_expr(record, table);
                           if (sub) out.write_line(serialize_expr(*sub));
                         } catch (const std::exception& ex) {
                           throw std::runtime_error("stage2: record " + std::to_string(idx) +
                                                    ": " + ex.what());
                         }
                       });
}

ShardSet expand_monomials_j(const ShardSet& in, const StageConfig& cfg, StageStats* stats) {
  return run_expand_stage("stage3", in.shards, cfg, stats);
}

ShardSet instantiate_ncp(const ShardSet& in, const StageConfig& cfg, StageStats* stats) {
  std::vector<TermBudget> budgets(cfg.workers);
  for (auto& b : budgets) b.cap = cfg.memory_term_cap;
  const std::size_t threshold =
      cfg.memory_term_cap == std::numeric_limits<std::size_t>::max()
          ? kDefaultRunTerms
          : std::max<std::size_t>(1, cfg.memory_term_cap / 2);

  ShardSet out = run_map_stage(
      "stage4", in.shards, cfg, stats,
      [&](unsigned wid, std::size_t idx, const std::string& line, ShardWriter& shard) {
        Expr record = parse_record(line, "stage4", idx);
        TermBudget& budget = budgets[wid];
        FlushingSink sink(shard, budget, threshold);
        try {
          stream_monomial(record, cfg.max_word_length, budget,
                          [&](Word w, Coefficient c) { sink.add(std::move(w), c); });
          sink.flush();
        } catch (const std::exception& ex) {
          throw std::runtime_error("stage4: record " + std::to_string(idx) + ": " + ex.what());
        }
        if (budget.over_cap())
          throw TermCapError("stage4: record " + std::to_string(idx) + " exceeded the memory "
                             "term cap (" + std::to_string(budget.peak) + " live terms, cap " +
                             std::to_string(budget.cap) + ")");
      });

  if (stats)
    for (const auto& b : budgets) stats->peak_live_terms = std::max(stats->peak_live_terms, b.peak);
  return out;
}

void aggregate(const ShardSet& in, const fs::path& out_file, const StageConfig& cfg,
               StageStats* stats) {
  const std::size_t run_terms = std::min(cfg.memory_term_cap, kDefaultRunTerms);
  TermBudget budget;
  budget.cap = cfg.memory_term_cap;

  // Writes one group of equal-word lines, summing coefficients when the
  // group has more than one member; singletons pass through verbatim.
  auto write_group = [](std::ostream& out, const Word& w, const std::vector<std::string>& lines) {
    if (lines.size() == 1) {
      out << lines[0] << '\n';
      return true;
    }
    Coefficient sum;
    for (const std::string& l : lines) sum += coefficient_of_line(l, 1);
    if (sum.is_zero()) return false;
    out << sum.to_string() << " ; " << w.to_string() << '\n';
    return true;
  };

  // Phase 1: cut every shard into sorted runs with like terms combined.
  std::vector<fs::path> runs;
  std::vector<RawTerm> buffer;
  std::size_t lines_in = 0;
  auto flush = [&]() {
    if (buffer.empty()) return;
    std::stable_sort(buffer.begin(), buffer.end(),
                     [](const RawTerm& a, const RawTerm& b) { return word_less(a.word, b.word); });
    fs::path run = cfg.workdir / ("aggregate_run" + std::to_string(runs.size()) + ".terms");
    std::ofstream out(run, std::ios::out | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot create run file " + run.string());
    std::vector<std::string> group;
    for (std::size_t i = 0; i < buffer.size();) {
      std::size_t j = i;
      group.clear();
      while (j < buffer.size() && buffer[j].word == buffer[i].word)
        group.push_back(std::move(buffer[j++].line));
      write_group(out, buffer[i].word, group);
      i = j;
    }
    if (!out) throw std::runtime_error("write failed on run file " + run.string());
    runs.push_back(run);
    budget.remove(buffer.size());
    buffer.clear();
  };

  for (const fs::path& shard : in.shards) {
    std::ifstream is(shard);
    if (!is) throw std::runtime_error("cannot open shard " + shard.string());
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
      ++lineno;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      while (!line.empty() && line.back() == '\r') line.pop_back();
      try {
        RawTerm t;
        t.word = word_key_of_line(line, lineno);
        t.line = std::move(line);
        buffer.push_back(std::move(t));
      } catch (const std::exception& ex) {
        throw std::runtime_error("aggregate: " + shard.string() + ": " + ex.what());
      }
      ++lines_in;
      budget.add(1);
      if (buffer.size() >= run_terms) flush();
    }
  }
  flush();
  if (stats) stats->records_in = lines_in;

  // Phase 2: k-way merge of the runs, summing equal words.
  fs::path tmp = out_file;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::out | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot create output file " + tmp.string());

    std::vector<AggregateInput> inputs(runs.size());
    auto heap_less = [&](std::size_t a, std::size_t b) {
      return word_less(inputs[b].term.word, inputs[a].term.word);  // min-heap
    };
    std::vector<std::size_t> heap;
    for (std::size_t i = 0; i < runs.size(); ++i) {
      inputs[i].path = runs[i];
      inputs[i].stream.open(runs[i]);
      if (!inputs[i].stream) throw std::runtime_error("cannot open run file " + runs[i].string());
      if (inputs[i].advance()) heap.push_back(i);
    }
    std::make_heap(heap.begin(), heap.end(), heap_less);

    std::size_t distinct = 0, max_len = 0;
    std::vector<std::string> group;
    while (!heap.empty()) {
      std::pop_heap(heap.begin(), heap.end(), heap_less);
      std::size_t i = heap.back();
      heap.pop_back();
      Word w = std::move(inputs[i].term.word);
      group.clear();
      group.push_back(std::move(inputs[i].term.line));
      if (inputs[i].advance()) {
        heap.push_back(i);
        std::push_heap(heap.begin(), heap.end(), heap_less);
      }
      while (!heap.empty() && inputs[heap.front()].term.word == w) {
        std::pop_heap(heap.begin(), heap.end(), heap_less);
        std::size_t k = heap.back();
        heap.pop_back();
        group.push_back(std::move(inputs[k].term.line));
        if (inputs[k].advance()) {
          heap.push_back(k);
          std::push_heap(heap.begin(), heap.end(), heap_less);
        }
      }
      if (write_group(out, w, group)) {
        ++distinct;
        max_len = std::max(max_len, w.size());
      }
    }
    if (!out) throw std::runtime_error("write failed on output file " + tmp.string());
    if (stats) {
      stats->records_out = distinct;
      stats->rounds = 1;
      stats->peak_live_terms = budget.peak;
    }
  }
  fs::rename(tmp, out_file);

  if (!cfg.keep_intermediate)
    for (const auto& r : runs) fs::remove(r);
}

PipelineSummary run_pipeline(const Model& model, unsigned R, const StageConfig& cfg,
                             const fs::path& out_file) {
  model.validate();
  if (R < 1) throw ConfigError("picard_iterations must be >= 1");
  if (cfg.workers < 1) throw ConfigError("workers must be >= 1");
  fs::create_directories(cfg.workdir);

  auto started = std::chrono::steady_clock::now();
  PipelineSummary summary;

  fs::path qexpr_file = cfg.workdir / "picard_q.qexpr";
  {
    std::ofstream out(qexpr_file, std::ios::out | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + qexpr_file.string());
    out << serialize_expr(picard_q(R, model.max_degree())) << '\n';
  }

  auto timed = [](StageStats* st, auto&& fn) {
    auto t0 = std::chrono::steady_clock::now();
    auto result = fn();
    st->seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
  };

  ShardSet s1 = timed(&summary.stages["stage1"],
                      [&] { return expand_monomials_q(qexpr_file, cfg, &summary.stages["stage1"]); });
  QTable table = build_q_table(model);
  ShardSet s2 = timed(&summary.stages["stage2"],
                      [&] { return substitute_q(s1, table, cfg, &summary.stages["stage2"]); });
  ShardSet s3 = timed(&summary.stages["stage3"],
                      [&] { return expand_monomials_j(s2, cfg, &summary.stages["stage3"]); });
  ShardSet s4 = timed(&summary.stages["stage4"],
                      [&] { return instantiate_ncp(s3, cfg, &summary.stages["stage4"]); });
  StageStats agg_stats;
  {
    auto t0 = std::chrono::steady_clock::now();
    aggregate(s4, out_file, cfg, &agg_stats);
    agg_stats.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  summary.stages["aggregate"] = agg_stats;

  summary.distinct_words = agg_stats.records_out;
  summary.output = out_file;
  for (const auto& [name, st] : summary.stages)
    summary.peak_live_terms = std::max(summary.peak_live_terms, st.peak_live_terms);

  {
    std::ifstream is(out_file);
    std::string line;
    while (std::getline(is, line)) {
      std::size_t sep = line.find(';');
      if (sep == std::string::npos) continue;
      std::size_t letters = 0;
      bool any = false;
      for (std::size_t i = sep + 1; i < line.size(); ++i) {
        if (line[i] == ',') ++letters;
        if (!std::isspace(static_cast<unsigned char>(line[i]))) any = true;
      }
      if (any) summary.max_word_length = std::max(summary.max_word_length, letters + 1);
    }
  }

  if (!cfg.keep_intermediate) {
    for (const ShardSet* s : {&s1, &s2, &s3, &s4}) {
      for (const auto& p : s->shards) fs::remove(p);
      fs::remove(s->manifest);
    }
    fs::remove(qexpr_file);
  }

  summary.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return summary;
}

}  // namespace stex
