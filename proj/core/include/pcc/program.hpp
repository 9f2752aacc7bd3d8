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

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pcc/dsl.hpp"

namespace pcc {

// One function call. Operands are slot indices; unused operand entries are 0.
struct Statement {
  std::uint8_t function = 0;
  std::array<std::uint8_t, 2> operands{};

  const FunctionClass& fn() const { return function_class(function); }
  int arity() const { return fn().arity(); }

  friend bool operator==(const Statement&, const Statement&) = default;
};

Statement make_statement(int function, int a, int b = 0);

// Inputs occupy indices 0..n-1 and statement i writes index n+i, so operand
// indices in a Program refer to creation order.
struct Program {
  std::vector<Kind> inputs;
  std::vector<Statement> statements;

  int num_inputs() const { return static_cast<int>(inputs.size()); }
  int length() const { return static_cast<int>(statements.size()); }

  // Kind of creation-order index `i`.
  Kind kind_of(int i) const;
  // Type and provenance check: every operand names an earlier value of the
  // right kind and there are 1..3 inputs.
  bool well_formed() const;

  friend bool operator==(const Program&, const Program&) = default;
};

Program parse_program(std::string_view text);
std::string format_program(const Program& program);

// Executes all statements; returns the last statement's value. Errc::Malformed
// when a statement reads an undefined or wrongly-typed value or the inputs do
// not match the declared kinds.
Outcome<Value> run_program(const Program& program, std::span<const Value> inputs);

// All intermediate values (inputs followed by each statement result).
Outcome<std::vector<Value>> trace_program(const Program& program, std::span<const Value> inputs);

}  // namespace pcc
