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

#include <cstdint>
#include <span>
#include <unordered_set>
#include <vector>

#include "pcc/environment.hpp"
#include "pcc/random.hpp"
#include "pcc/vocabulary.hpp"

namespace pcc {

// ------------------------------------------------------------------ programs

// Every statement that type-checks against values of the given kinds
// (creation order), in vocabulary table order.
std::vector<Statement> valid_statements(std::span<const Kind> kinds);

// 1..3 inputs (uniform count, at least one LIST), then each statement drawn
// uniformly from the type-valid statements over the values defined so far.
Program sample_program(int length, Rng& rng);
Program sample_program(std::span<const Kind> inputs, int length, Rng& rng);

// True iff some input or statement result does not feed the final statement.
bool has_redundant_variables(const Program& program);

// ------------------------------------------------------------------ signatures

inline constexpr int kProbesPerSignature = 16;

// Fixed probe inputs for an input-kind signature: empty lists, singletons,
// negatives, duplicates and max-length lists, generated from a constant seed.
const std::vector<std::vector<Value>>& probe_bank(std::span<const Kind> inputs);

// Hash of the output (or failure) sequence over the probes.
std::uint64_t semantic_signature(const Program& program, std::span<const std::vector<Value>> probes);
std::uint64_t semantic_signature(const Program& program);

// ------------------------------------------------------------------ inputs

struct IntervalConstraint {
  int lo = kMinInt;
  int hi = kMaxInt;
  int max_len = kMaxListLength;

  void meet(const IntervalConstraint& other);
  bool empty() const { return lo > hi || max_len < 0; }

  friend bool operator==(const IntervalConstraint&, const IntervalConstraint&) = default;
};

// Backward propagation from the domain bounds at every statement result to
// the inputs. Errc::Infeasible when an interval empties.
Outcome<std::vector<IntervalConstraint>> propagate_bounds(const Program& program);

inline constexpr int kInputRetryBudget = 1000;

// k examples sampled inside the constraints, each verified by execution.
// Errc::GenerationFailed after kInputRetryBudget rejected candidates.
Outcome<std::vector<Example>> sample_inputs(const Program& program, std::span<const IntervalConstraint> constraints,
                                            int k, Rng& rng);

// ------------------------------------------------------------------ corpus

struct DatasetRecord {
  Program program;
  std::vector<Example> examples;
};

struct DatasetManifest {
  int version = 1;
  int max_len = 0;
  int k = 0;
  std::uint64_t seed = 0;
};

struct Dataset {
  DatasetManifest manifest;
  std::vector<DatasetRecord> records;
};

struct DatasetConfig {
  int count = 1000;
  int max_len = 4;
  // Lengths are uniform over [min_len, max_len].
  int min_len = 1;
  int k = 5;
  std::uint64_t seed = 0;
  // Signatures that must not appear (e.g. a training corpus when building a
  // disjoint test set).
  const std::unordered_set<std::uint64_t>* exclude = nullptr;
};

Dataset build_dataset(const DatasetConfig& config);

std::unordered_set<std::uint64_t> corpus_signatures(const Dataset& dataset);

// Re-executes every record; false if any example disagrees or fails.
bool validate_record(const DatasetRecord& record);

// ------------------------------------------------------------------ training rows

struct TrainingRow {
  Environment env;
  int next_statement = 0;
  int next_function = 0;
  // Per slot: 1 if the slot is live and unused by the remaining statements.
  std::vector<std::uint8_t> drop_labels;
  // Per slot: 1 if the slot carries a label (is live).
  std::vector<std::uint8_t> drop_mask;
};

// One row per statement. When every slot is live the lowest-index slot with no
// future use is freed before the step and operands are rewritten to current
// slots. Errc::TooManyLiveVars when no slot can be freed.
Outcome<std::vector<TrainingRow>> make_training_rows(const DatasetRecord& record, const StatementVocabulary& vocab);

}  // namespace pcc
