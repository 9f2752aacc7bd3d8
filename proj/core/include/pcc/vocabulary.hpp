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
#include <vector>

#include "pcc/program.hpp"

namespace pcc {

// Canonical enumeration of every (function class, operand tuple) over a fixed
// number of slots, valid and invalid alike. Order: function classes in table
// order, then operand tuples lexicographically.
class StatementVocabulary {
 public:
  explicit StatementVocabulary(int slots);

  int slots() const { return slots_; }
  int size() const { return static_cast<int>(entries_.size()); }

  const Statement& entry_at(int index) const { return entries_.at(static_cast<std::size_t>(index)); }
  int index_of(const Statement& s) const;

  // Stable across runs and platforms; stored in checkpoints.
  std::uint64_t hash() const { return hash_; }

 private:
  int slots_;
  std::vector<Statement> entries_;
  std::vector<int> offsets_;
  std::uint64_t hash_ = 0;
};

StatementVocabulary build_vocabulary(int slots);

}  // namespace pcc
