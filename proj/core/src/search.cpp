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

#include "pcc/search.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace pcc {

namespace {

constexpr std::size_t kPredictChunk = 32;
constexpr int kDeadlineStride = 256;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

bool is_operand(const Statement& stmt, int slot) {
  for (int j = 0; j < stmt.arity(); ++j)
    if (stmt.operands[static_cast<std::size_t>(j)] == slot) return true;
  return false;
}

int pick_drop(const Environment& env, const Statement& stmt, std::span<const float> drop_probs, Rng* random_drop) {
  return random_drop != nullptr ? choose_random_drop(env, stmt, *random_drop) : choose_drop(env, stmt, drop_probs);
}

// Predictions for nodes[begin, end) in chunks.
template <class GetEnv>
void predict_range(const Guide& guide, std::size_t count, GetEnv get_env, const Deadline& deadline,
                   SearchStats& stats, PredictionBatch& chunk, const std::function<void(std::size_t, int)>& consume,
                   bool& timed_out) {
  std::vector<const Environment*> envs;
  for (std::size_t begin = 0; begin < count; begin += kPredictChunk) {
    if (deadline.expired()) {
      timed_out = true;
      return;
    }
    const std::size_t end = std::min(count, begin + kPredictChunk);
    envs.clear();
    for (std::size_t i = begin; i < end; ++i) envs.push_back(&get_env(i));
    guide.predict(envs, chunk);
    stats.model_evaluations += static_cast<long long>(end - begin);
    for (std::size_t i = begin; i < end; ++i) consume(i, static_cast<int>(i - begin));
  }
}

std::vector<int> top_of_column(const PredictionBatch& batch, int col, int count) {
  const auto column = batch.statement_logprobs.col(col);
  return top_statements(std::span<const float>(column.data(), static_cast<std::size_t>(column.size())), count);
}

void assert_sound(const SearchResult& result, std::span<const Example> examples) {
  if (result.status == SearchStatus::Solved && (!result.program || !verify_solution(*result.program, examples)))
    throw std::logic_error("search returned a program that does not satisfy the examples");
}

}  // namespace

Deadline Deadline::after(double seconds) {
  Deadline d;
  if (seconds > 0 && std::isfinite(seconds))
    d.end_ = Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(seconds));
  return d;
}

std::string_view status_name(SearchStatus status) {
  switch (status) {
    case SearchStatus::Solved: return "solved";
    case SearchStatus::Timeout: return "timeout";
    case SearchStatus::Exhausted: return "exhausted";
  }
  return "?";
}

int choose_drop(const Environment& env, const Statement& stmt, std::span<const float> drop_probs) {
  int best = -1;
  for (int s = 0; s < env.slots(); ++s) {
    if (!env.live(s) || is_operand(stmt, s)) continue;
    if (best < 0 || drop_probs[static_cast<std::size_t>(s)] > drop_probs[static_cast<std::size_t>(best)]) best = s;
  }
  return best;
}

int choose_random_drop(const Environment& env, const Statement& stmt, Rng& rng) {
  int options[64];
  int n = 0;
  for (int s = 0; s < env.slots() && n < 64; ++s)
    if (env.live(s) && !is_operand(stmt, s)) options[n++] = s;
  if (n == 0) return -1;
  return options[rng.uniform_int(0, n - 1)];
}

std::vector<int> top_statements(std::span<const float> logprobs, int count) {
  std::vector<int> idx(logprobs.size());
  std::iota(idx.begin(), idx.end(), 0);
  const auto k = static_cast<std::size_t>(std::clamp(count, 0, static_cast<int>(idx.size())));
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(), [&](int a, int b) {
    const float la = logprobs[static_cast<std::size_t>(a)];
    const float lb = logprobs[static_cast<std::size_t>(b)];
    return la != lb ? la > lb : a < b;
  });
  idx.resize(k);
  return idx;
}

std::vector<SearchNode> expand(const SearchNode& node, const Prediction& pred, const StatementVocabulary& vocab,
                               int beta, Rng* random_drop) {
  std::vector<SearchNode> children;
  const bool full = node.env.full();
  for (int idx : top_statements(pred.statement_logprobs, beta)) {
    const Statement& stmt = vocab.entry_at(idx);
    int drop = -1;
    if (full) {
      drop = pick_drop(node.env, stmt, pred.drop_probs, random_drop);
      if (drop < 0) continue;
    }
    auto child = node.env.step(stmt, drop);
    if (!child) continue;
    children.push_back({std::move(*child), node.score + pred.statement_logprobs[static_cast<std::size_t>(idx)]});
  }
  return children;
}

std::vector<SearchNode> expand(const SearchNode& node, const Guide& guide, const StatementVocabulary& vocab, int beta,
                               Rng* random_drop) {
  PredictionBatch batch;
  const Environment* envs[] = {&node.env};
  guide.predict(envs, batch);
  return expand(node, column(batch, 0), vocab, beta, random_drop);
}

SearchResult beam_search(std::span<const Example> examples, const Guide& guide, int alpha, int beta, int max_length,
                         const Deadline& deadline, const GcOptions& gc) {
  if (alpha < 1 || beta < 1 || max_length < 1) throw Error(Errc::InvalidArgument, "alpha, beta, max_length must be >= 1");
  const auto start = Clock::now();
  const int v = guide.slots();
  const StatementVocabulary vocab = build_vocabulary(v);
  const int size = vocab.size();
  const int width = std::min(beta, size);
  Rng drop_rng(gc.seed);
  Rng* random_drop = gc.random_drop ? &drop_rng : nullptr;

  SearchResult result;
  bool pruned = beta < size;
  std::vector<SearchNode> beam;
  beam.push_back({Environment::create(examples, v), 0.0});

  struct Candidate {
    double score;
    int node;
    int rank;
  };
  std::vector<int> tops;
  std::vector<float> lps;
  std::vector<float> drops;
  std::vector<Candidate> candidates;
  PredictionBatch chunk;

  auto finish = [&](SearchStatus status) {
    result.status = status;
    result.stats.seconds = seconds_since(start);
    result.complete = status == SearchStatus::Exhausted && !pruned;
    assert_sound(result, examples);
    return result;
  };

  for (int depth = 0; depth < max_length && !beam.empty(); ++depth) {
    const std::size_t n = beam.size();
    tops.assign(n * static_cast<std::size_t>(width), -1);
    lps.assign(n * static_cast<std::size_t>(width), 0.0f);
    drops.assign(n * static_cast<std::size_t>(v), 0.0f);
    bool timed_out = false;
    predict_range(
        guide, n, [&](std::size_t i) -> const Environment& { return beam[i].env; }, deadline, result.stats, chunk,
        [&](std::size_t i, int col) {
          const auto top = top_of_column(chunk, col, width);
          for (std::size_t r = 0; r < top.size(); ++r) {
            tops[i * static_cast<std::size_t>(width) + r] = top[r];
            lps[i * static_cast<std::size_t>(width) + r] = chunk.statement_logprobs(top[r], col);
          }
          for (int j = 0; j < v; ++j) drops[i * static_cast<std::size_t>(v) + static_cast<std::size_t>(j)] = chunk.drop_probs(j, col);
        },
        timed_out);
    if (timed_out) return finish(SearchStatus::Timeout);
    result.stats.nodes_expanded += static_cast<long long>(n);

    candidates.clear();
    for (std::size_t i = 0; i < n; ++i)
      for (int r = 0; r < width; ++r)
        candidates.push_back({beam[i].score + lps[i * static_cast<std::size_t>(width) + static_cast<std::size_t>(r)],
                              static_cast<int>(i), r});
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
      if (a.score != b.score) return a.score > b.score;
      return a.node != b.node ? a.node < b.node : a.rank < b.rank;
    });

    std::vector<SearchNode> next;
    std::unordered_set<std::uint64_t> seen;
    const bool last_level = depth + 1 == max_length;
    int counter = 0;
    for (const Candidate& cand : candidates) {
      if (++counter % kDeadlineStride == 0 && deadline.expired()) return finish(SearchStatus::Timeout);
      const SearchNode& parent = beam[static_cast<std::size_t>(cand.node)];
      const Statement& stmt =
          vocab.entry_at(tops[static_cast<std::size_t>(cand.node) * static_cast<std::size_t>(width) +
                              static_cast<std::size_t>(cand.rank)]);
      int drop = -1;
      if (parent.env.full()) {
        const std::span<const float> probs(drops.data() + static_cast<std::size_t>(cand.node) * static_cast<std::size_t>(v),
                                           static_cast<std::size_t>(v));
        drop = pick_drop(parent.env, stmt, probs, random_drop);
        if (drop < 0) continue;
      }
      if (parent.env.would_solve(stmt)) {
        auto child = parent.env.step(stmt, drop);
        if (child && child->solved()) {
          result.program = child->program();
          return finish(SearchStatus::Solved);
        }
      }
      if (last_level) continue;
      if (static_cast<int>(next.size()) >= alpha) {
        pruned = true;
        continue;
      }
      auto child = parent.env.step(stmt, drop);
      if (!child) continue;
      ++result.stats.children;
      if (seen.insert(child->fingerprint()).second) next.push_back({std::move(*child), cand.score});
    }
    beam = std::move(next);
  }
  return finish(SearchStatus::Exhausted);
}

SearchResult cab(std::span<const Example> examples, const Guide& guide, const CabConfig& config) {
  if (config.alpha0 < 1 || config.beta0 < 1 || config.c < 0 || config.max_length < 1)
    throw Error(Errc::InvalidArgument, "CAB parameters must be positive");
  const auto start = Clock::now();
  const Deadline deadline = Deadline::after(config.timeout);
  const int size = guide.vocabulary_size();
  SearchResult total;
  for (int i = 0;; ++i) {
    const long long alpha = std::min<long long>(static_cast<long long>(config.alpha0) << std::min(i, 40),
                                                std::numeric_limits<int>::max());
    const int beta = static_cast<int>(std::min<long long>(config.beta0 + static_cast<long long>(config.c) * i, size));
    GcOptions gc = config.gc;
    gc.seed = derive_seed(config.gc.seed, static_cast<std::uint64_t>(i));
    SearchResult pass = beam_search(examples, guide, static_cast<int>(alpha), beta, config.max_length, deadline, gc);
    total.stats.nodes_expanded += pass.stats.nodes_expanded;
    total.stats.model_evaluations += pass.stats.model_evaluations;
    total.stats.children += pass.stats.children;
    total.stats.restarts = i;
    total.status = pass.status;
    total.program = std::move(pass.program);
    total.complete = pass.complete;
    if (pass.status != SearchStatus::Exhausted || pass.complete) break;
  }
  total.stats.seconds = seconds_since(start);
  assert_sound(total, examples);
  return total;
}

namespace {

struct DfsRun {
  const Guide& guide;
  const StatementVocabulary& vocab;
  const DfsConfig& config;
  Deadline deadline;
  Rng* random_drop;
  SearchResult result;
  PredictionBatch chunk;

  // Returns true when the search should stop (solved or timed out).
  bool visit(const SearchNode& node, const Prediction& pred) {
    ++result.stats.nodes_expanded;
    std::vector<SearchNode> children;
    const bool full = node.env.full();
    for (int idx : top_statements(pred.statement_logprobs, config.width)) {
      if (deadline.expired()) {
        result.status = SearchStatus::Timeout;
        return true;
      }
      const Statement& stmt = vocab.entry_at(idx);
      int drop = -1;
      if (full) {
        drop = pick_drop(node.env, stmt, pred.drop_probs, random_drop);
        if (drop < 0) continue;
      }
      auto child = node.env.step(stmt, drop);
      if (!child) continue;
      ++result.stats.children;
      if (child->solved()) {
        result.status = SearchStatus::Solved;
        result.program = child->program();
        return true;
      }
      children.push_back({std::move(*child), node.score + pred.statement_logprobs[static_cast<std::size_t>(idx)]});
    }
    if (node.depth() + 1 >= config.max_length || children.empty()) return false;

    std::vector<Prediction> preds(children.size());
    bool timed_out = false;
    predict_range(
        guide, children.size(), [&](std::size_t i) -> const Environment& { return children[i].env; }, deadline,
        result.stats, chunk, [&](std::size_t i, int col) { preds[i] = column(chunk, col); }, timed_out);
    if (timed_out) {
      result.status = SearchStatus::Timeout;
      return true;
    }
    for (std::size_t i = 0; i < children.size(); ++i)
      if (visit(children[i], preds[i])) return true;
    return false;
  }
};

}  // namespace

SearchResult dfs(std::span<const Example> examples, const Guide& guide, const DfsConfig& config) {
  if (config.width < 1 || config.max_length < 1) throw Error(Errc::InvalidArgument, "width and max_length must be >= 1");
  const auto start = Clock::now();
  const StatementVocabulary vocab = build_vocabulary(guide.slots());
  Rng drop_rng(config.gc.seed);
  DfsRun run{guide, vocab, config, Deadline::after(config.timeout), config.gc.random_drop ? &drop_rng : nullptr, {}, {}};

  const SearchNode root{Environment::create(examples, guide.slots()), 0.0};
  const Environment* envs[] = {&root.env};
  guide.predict(envs, run.chunk);
  ++run.result.stats.model_evaluations;
  run.result.status = SearchStatus::Exhausted;
  if (!run.visit(root, column(run.chunk, 0))) run.result.complete = config.width >= vocab.size();
  run.result.stats.seconds = seconds_since(start);
  assert_sound(run.result, examples);
  return run.result;
}

bool verify_solution(const Program& program, std::span<const Example> examples) {
  if (!program.well_formed() || program.length() == 0) return false;
  for (const Example& ex : examples) {
    if (static_cast<int>(ex.inputs.size()) != program.num_inputs()) return false;
    auto out = run_program(program, ex.inputs);
    if (!out || !(*out == ex.output)) return false;
  }
  return true;
}

}  // namespace pcc
