// Copyright 2026 The pcc Authors. All rights reserved.
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

#include <chrono>
#include <optional>
#include <span>
#include <vector>

#include "pcc/environment.hpp"
#include "pcc/guide.hpp"
#include "pcc/random.hpp"
#include "pcc/vocabulary.hpp"

namespace pcc {

struct SearchNode {
  Environment env;
  double score = 0;  // sum of chosen statement log-probabilities

  int depth() const { return env.depth(); }
};

class Deadline {
 public:
  static Deadline never() { return Deadline(); }
  // Non-positive or non-finite seconds mean no deadline.
  static Deadline after(double seconds);

  bool expired() const { return end_ && std::chrono::steady_clock::now() >= *end_; }

 private:
  std::optional<std::chrono::steady_clock::time_point> end_;
};

struct GcOptions {
  // Free a uniformly chosen non-operand slot instead of the most droppable.
  bool random_drop = false;
  std::uint64_t seed = 0;
};

struct CabConfig {
  int alpha0 = 100;
  int beta0 = 10;
  int c = 10;
  int max_length = 4;
  double timeout = 0;  // seconds; <= 0 runs until solved or exhausted
  GcOptions gc;
};

struct DfsConfig {
  int width = 50;
  int max_length = 4;
  double timeout = 0;
  GcOptions gc;
};

enum class SearchStatus { Solved, Timeout, Exhausted };

std::string_view status_name(SearchStatus status);

struct SearchStats {
  long long nodes_expanded = 0;
  long long model_evaluations = 0;
  long long children = 0;
  int restarts = 0;
  double seconds = 0;
};

struct SearchResult {
  SearchStatus status = SearchStatus::Exhausted;
  std::optional<Program> program;
  SearchStats stats;
  // True when the run enumerated everything up to max_length (nothing cut by
  // alpha or beta), so an unsolved outcome is final.
  bool complete = false;
};

// Slot to free before `stmt` on a full environment: never an operand of
// `stmt`; otherwise highest drop probability, ties to the lowest index.
// -1 if every slot is an operand.
int choose_drop(const Environment& env, const Statement& stmt, std::span<const float> drop_probs);
int choose_random_drop(const Environment& env, const Statement& stmt, Rng& rng);

// Indices of the `count` most likely statements, ties by vocabulary index.
std::vector<int> top_statements(std::span<const float> logprobs, int count);

// Children of `node` from its top-beta statements in rank order. Failing
// statements are skipped but count against beta.
std::vector<SearchNode> expand(const SearchNode& node, const Prediction& pred, const StatementVocabulary& vocab,
                               int beta, Rng* random_drop = nullptr);
std::vector<SearchNode> expand(const SearchNode& node, const Guide& guide, const StatementVocabulary& vocab, int beta,
                               Rng* random_drop = nullptr);

// One level-synchronous beam pass. Status is Solved, Timeout, or Exhausted
// (beam emptied or max_length reached).
SearchResult beam_search(std::span<const Example> examples, const Guide& guide, int alpha, int beta, int max_length,
                         const Deadline& deadline, const GcOptions& gc = {});

// Restarts beam search with alpha0 * 2^i and beta0 + c * i until solved, out
// of time, or a pass that pruned nothing fails.
SearchResult cab(std::span<const Example> examples, const Guide& guide, const CabConfig& config);

// Depth-first over the top-width statements of each node.
SearchResult dfs(std::span<const Example> examples, const Guide& guide, const DfsConfig& config);

inline Program reconstruct_program(const SearchNode& node) { return node.env.program(); }

// True iff `program` maps every example's inputs to its output.
bool verify_solution(const Program& program, std::span<const Example> examples);

}  // namespace pcc
