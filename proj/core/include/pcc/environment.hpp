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
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "pcc/example.hpp"
#include "pcc/program.hpp"

namespace pcc {

// The k per-example program states over a fixed number of slots. All
// examples share slot occupancy, slot kinds and provenance, so those are
// stored once. Immutable: step/drop return new environments.
class Environment {
 public:
  static Environment create(std::span<const Example> examples, int slots);

  int num_examples() const { return shared_->examples; }
  int slots() const { return shared_->slots; }
  int num_inputs() const { return static_cast<int>(shared_->input_kinds.size()); }
  std::span<const Kind> input_kinds() const { return shared_->input_kinds; }

  bool live(int slot) const { return origin_[static_cast<std::size_t>(slot)] >= 0; }
  int live_count() const;
  bool full() const { return live_count() == slots(); }
  // Kind of a live slot (identical across examples).
  Kind slot_kind(int slot) const { return value(0, slot).kind(); }

  const Value& value(int example, int slot) const {
    return values_[static_cast<std::size_t>(example * slots() + slot)];
  }
  const Value& output(int example) const { return shared_->outputs[static_cast<std::size_t>(example)]; }

  // Creation-order index of the value held in `slot`, or -1 for NULL.
  int origin(int slot) const { return origin_[static_cast<std::size_t>(slot)]; }
  // Slot written by the most recent statement, or -1 before any statement.
  int newest_slot() const { return newest_; }
  int depth() const { return depth_; }
  int lowest_free_slot() const;

  // Errc::Malformed for an operand outside the slot range, NullOperand,
  // TypeMismatch, NoFreeSlot, or the first failing example's fault.
  Outcome<Environment> step(const Statement& stmt) const;
  // Frees `drop_slot` (if >= 0) and then steps; the dropped slot must not be
  // an operand of `stmt`.
  Outcome<Environment> step(const Statement& stmt, int drop_slot) const;
  Outcome<Environment> drop(int slot) const;

  // True iff the newest value equals the target output in every example.
  bool solved() const;
  // Whether stepping `stmt` would produce a solved environment; evaluates
  // examples lazily and stops at the first mismatch.
  bool would_solve(const Statement& stmt) const;

  std::uint64_t fingerprint() const;

  // Replays provenance into a program over creation-order indices.
  Program program() const;

 private:
  struct Shared {
    int examples = 0;
    int slots = 0;
    std::vector<Kind> input_kinds;
    std::vector<Value> outputs;
    std::uint64_t outputs_hash = 0;
  };
  struct Trace {
    std::shared_ptr<const Trace> parent;
    Statement statement;
  };

  std::optional<Errc> check_operands(const Statement& stmt, int dropped) const;

  std::shared_ptr<const Shared> shared_;
  std::vector<Value> values_;
  std::vector<std::int16_t> origin_;
  std::shared_ptr<const Trace> trace_;
  int newest_ = -1;
  int depth_ = 0;
};

inline Environment init_environment(std::span<const Example> examples, int slots) {
  return Environment::create(examples, slots);
}
inline Outcome<Environment> step_environment(const Environment& env, const Statement& stmt) { return env.step(stmt); }
inline Outcome<Environment> drop_variable(const Environment& env, int slot) { return env.drop(slot); }
inline bool is_solved(const Environment& env) { return env.solved(); }
inline std::uint64_t env_fingerprint(const Environment& env) { return env.fingerprint(); }

}  // namespace pcc
