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
#include <filesystem>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "stex/model.hpp"
#include "stex/qexpr.hpp"

namespace stex {

/// Knobs shared by every pipeline stage.
///
/// `memory_term_cap` bounds the number of LinComb terms a worker may hold
/// live at once. A single record that cannot be processed under the cap is
/// an error (the cap is too small), never a silent truncation; the whole
/// expansion may be far larger than the cap, which is the point of the
/// staged out-of-core design.
struct StageConfig {
  unsigned workers = 1;
  std::filesystem::path workdir;
  MaxLen max_word_length = kUnbounded;
  std::size_t memory_term_cap = std::numeric_limits<std::size_t>::max();
  bool keep_intermediate = false;
};

/// Per-worker output files of one stage plus their manifest. No two workers
/// ever write the same file; the stage output is the concatenation of the
/// shards.
struct ShardSet {
  std::string stage;  // "stage1".."stage4"
  std::vector<std::filesystem::path> shards;
  std::filesystem::path manifest;
};

struct StageStats {
  std::size_t records_in = 0;
  std::size_t records_out = 0;
  std::size_t rounds = 0;
  std::size_t peak_live_terms = 0;  // max over workers
  double seconds = 0.0;
};

struct PipelineSummary {
  std::size_t distinct_words = 0;
  std::size_t max_word_length = 0;
  std::size_t peak_live_terms = 0;  // max over all stages and workers
  double wall_seconds = 0.0;
  std::map<std::string, StageStats> stages;
  std::filesystem::path output;
};

/// Stage 1: rewrites QExpr records until none contains a Sum or Pow. Powers
/// unroll into repeated products, sums distribute one level per round, and
/// partially rewritten records are re-queued, so no record ever expands in
/// one pass.
ShardSet expand_monomials_q(const std::filesystem::path& in_file, const StageConfig& cfg,
                            StageStats* stats = nullptr);

/// Stage 2: replaces every Q placeholder by its model value. Output records
/// are expressions over J atoms, Prod and |> (with sums where a Q value has
/// several drivers); |> stays symbolic. A record whose Q value is missing
/// from the table is an error naming the index.
ShardSet substitute_q(const ShardSet& in, const QTable& table, const StageConfig& cfg,
                      StageStats* stats = nullptr);

/// Stage 3: same worklist rewriting as stage 1, on J expressions.
ShardSet expand_monomials_j(const ShardSet& in, const StageConfig& cfg,
                            StageStats* stats = nullptr);

/// Stage 4: instantiates |> in terms of shuffle products, bottom-up per
/// record, truncating at every node. Output shards hold expansion lines.
ShardSet instantiate_ncp(const ShardSet& in, const StageConfig& cfg,
                         StageStats* stats = nullptr);

/// Final stage: external merge of all shard lines. Each shard is split into
/// sorted, locally-combined runs of at most `memory_term_cap` terms, then all
/// runs are k-way merged summing coefficients of equal words and dropping
/// zeros. The output is canonical and independent of worker count and
/// scheduling.
void aggregate(const ShardSet& in, const std::filesystem::path& out_file, const StageConfig& cfg,
               StageStats* stats = nullptr);

/// Chains picard_q -> expand -> substitute -> expand -> instantiate ->
/// aggregate. The result file equals the canonical serialization of
/// picard_direct(model, R, max_word_length) exactly. On error the workdir is
/// left intact for post-mortem inspection.
PipelineSummary run_pipeline(const Model& model, unsigned R, const StageConfig& cfg,
                             const std::filesystem::path& out_file);

}  // namespace stex
