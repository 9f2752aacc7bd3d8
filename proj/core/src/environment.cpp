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

#include "pcc/environment.hpp"

#include <algorithm>

namespace pcc {

namespace {

inline std::uint64_t mix64(std::uint64_t h, std::uint64_t x) {
  // splitmix64 finaliser over a running combination.
  h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  h ^= h >> 30;
  h *= 0xbf58476d1ce4e5b9ULL;
  h ^= h >> 27;
  h *= 0x94d049bb133111ebULL;
  h ^= h >> 31;
  return h;
}

}  // namespace

Environment Environment::create(std::span<const Example> examples, int slots) {
  if (examples.empty()) throw Error(Errc::InconsistentExamples, "no examples");
  const std::size_t n = examples[0].inputs.size();
  if (n == 0 || static_cast<int>(n) > slots)
    throw Error(Errc::InvalidArgument, "input count must be in [1, slots]");

  auto shared = std::make_shared<Shared>();
  shared->examples = static_cast<int>(examples.size());
  shared->slots = slots;
  for (const Value& v : examples[0].inputs) shared->input_kinds.push_back(v.kind());

  Environment env;
  env.values_.resize(examples.size() * static_cast<std::size_t>(slots));
  env.origin_.assign(static_cast<std::size_t>(slots), -1);
  for (std::size_t i = 0; i < n; ++i) env.origin_[i] = static_cast<std::int16_t>(i);

  std::uint64_t h = 0;
  for (std::size_t e = 0; e < examples.size(); ++e) {
    const Example& ex = examples[e];
    if (ex.inputs.size() != n) throw Error(Errc::InconsistentExamples, "input counts differ across examples");
    for (std::size_t i = 0; i < n; ++i) {
      if (ex.inputs[i].kind() != shared->input_kinds[i])
        throw Error(Errc::InconsistentExamples, "input kinds differ across examples");
      env.values_[e * static_cast<std::size_t>(slots) + i] = ex.inputs[i];
    }
    shared->outputs.push_back(ex.output);
    h = mix64(h, ex.output.hash());
  }
  shared->outputs_hash = h;
  env.shared_ = std::move(shared);
  return env;
}

int Environment::live_count() const {
  return static_cast<int>(std::count_if(origin_.begin(), origin_.end(), [](std::int16_t o) { return o >= 0; }));
}

int Environment::lowest_free_slot() const {
  for (int s = 0; s < slots(); ++s)
    if (!live(s)) return s;
  return -1;
}

std::optional<Errc> Environment::check_operands(const Statement& stmt, int dropped) const {
  if (stmt.function >= kNumFunctions) return Errc::Malformed;
  const FunctionClass& fc = stmt.fn();
  for (int j = 0; j < fc.arity(); ++j) {
    const int slot = stmt.operands[static_cast<std::size_t>(j)];
    if (slot >= slots()) return Errc::Malformed;
    if (!live(slot) || slot == dropped) return Errc::NullOperand;
    if (slot_kind(slot) != fc.operand(j)) return Errc::TypeMismatch;
  }
  return std::nullopt;
}

Outcome<Environment> Environment::step(const Statement& stmt) const { return step(stmt, -1); }

Outcome<Environment> Environment::step(const Statement& stmt, int drop_slot) const {
  if (drop_slot >= 0 && (drop_slot >= slots() || !live(drop_slot))) return Errc::NotLive;
  if (auto fault = check_operands(stmt, drop_slot)) return *fault;

  int target = drop_slot;
  for (int s = 0; s < slots(); ++s) {
    if (!live(s)) {
      target = drop_slot < 0 ? s : std::min(s, drop_slot);
      break;
    }
  }
  if (target < 0) return Errc::NoFreeSlot;

  const FunctionClass& fc = stmt.fn();
  const int a = stmt.operands[0];
  const int b = fc.arity() == 2 ? stmt.operands[1] : a;

  Environment next;
  next.shared_ = shared_;
  next.values_ = values_;
  next.origin_ = origin_;
  const int k = num_examples();
  const int v = slots();
  for (int e = 0; e < k; ++e) {
    auto result = apply_function(stmt.function, value(e, a), value(e, b));
    if (!result) return result.fault();
    next.values_[static_cast<std::size_t>(e * v + target)] = *result;
  }
  if (drop_slot >= 0 && drop_slot != target) {
    for (int e = 0; e < k; ++e) next.values_[static_cast<std::size_t>(e * v + drop_slot)] = Value();
    next.origin_[static_cast<std::size_t>(drop_slot)] = -1;
  }

  Statement recorded = stmt;
  recorded.operands = {static_cast<std::uint8_t>(origin(a)),
                       static_cast<std::uint8_t>(fc.arity() == 2 ? origin(b) : 0)};
  next.trace_ = std::make_shared<const Trace>(Trace{trace_, recorded});
  next.origin_[static_cast<std::size_t>(target)] = static_cast<std::int16_t>(num_inputs() + depth_);
  next.newest_ = target;
  next.depth_ = depth_ + 1;
  return next;
}

Outcome<Environment> Environment::drop(int slot) const {
  if (slot < 0 || slot >= slots() || !live(slot)) return Errc::NotLive;
  Environment next = *this;
  for (int e = 0; e < num_examples(); ++e) next.values_[static_cast<std::size_t>(e * slots() + slot)] = Value();
  next.origin_[static_cast<std::size_t>(slot)] = -1;
  if (next.newest_ == slot) next.newest_ = -1;
  return next;
}

bool Environment::solved() const {
  if (newest_ < 0) return false;
  for (int e = 0; e < num_examples(); ++e)
    if (!(value(e, newest_) == output(e))) return false;
  return true;
}

bool Environment::would_solve(const Statement& stmt) const {
  if (check_operands(stmt, -1)) return false;
  const FunctionClass& fc = stmt.fn();
  if (fc.result() != output(0).kind()) return false;
  const int a = stmt.operands[0];
  const int b = fc.arity() == 2 ? stmt.operands[1] : a;
  for (int e = 0; e < num_examples(); ++e) {
    auto result = apply_function(stmt.function, value(e, a), value(e, b));
    if (!result || !(*result == output(e))) return false;
  }
  return true;
}

std::uint64_t Environment::fingerprint() const {
  std::uint64_t h = mix64(shared_->outputs_hash, static_cast<std::uint64_t>(slots()));
  for (int s = 0; s < slots(); ++s) {
    if (!live(s)) {
      h = mix64(h, 0x5bd1e995ULL + static_cast<std::uint64_t>(s));
      continue;
    }
    for (int e = 0; e < num_examples(); ++e) h = mix64(h, value(e, s).hash());
  }
  return h;
}

Program Environment::program() const {
  Program p;
  p.inputs = shared_->input_kinds;
  for (const Trace* t = trace_.get(); t != nullptr; t = t->parent.get()) p.statements.push_back(t->statement);
  std::reverse(p.statements.begin(), p.statements.end());
  return p;
}

}  // namespace pcc
