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

#include "pcc/vocabulary.hpp"

namespace pcc {

StatementVocabulary::StatementVocabulary(int slots) : slots_(slots) {
  if (slots < 1 || slots > 255) throw Error(Errc::InvalidArgument, "slot count must be in [1, 255]");
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t x) {
    h ^= x;
    h *= 1099511628211ULL;
  };
  mix(static_cast<std::uint64_t>(slots));
  for (int f = 0; f < kNumFunctions; ++f) {
    offsets_.push_back(size());
    if (function_class(f).arity() == 1) {
      for (int a = 0; a < slots; ++a) entries_.push_back(make_statement(f, a));
    } else {
      for (int a = 0; a < slots; ++a)
        for (int b = 0; b < slots; ++b) entries_.push_back(make_statement(f, a, b));
    }
  }
  for (const Statement& s : entries_) {
    mix(s.function);
    mix(s.operands[0]);
    mix(s.operands[1]);
  }
  hash_ = h;
}

int StatementVocabulary::index_of(const Statement& s) const {
  if (s.function >= kNumFunctions) throw Error(Errc::InvalidArgument, "function id out of range");
  const int a = s.operands[0];
  const int b = s.operands[1];
  const int arity = s.arity();
  if (a >= slots_ || (arity == 2 && b >= slots_) || (arity == 1 && b != 0))
    throw Error(Errc::InvalidArgument, "operand outside the vocabulary");
  const int base = offsets_[s.function];
  return arity == 1 ? base + a : base + a * slots_ + b;
}

StatementVocabulary build_vocabulary(int slots) { return StatementVocabulary(slots); }

}  // namespace pcc
