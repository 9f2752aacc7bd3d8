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

#include "pcc/program.hpp"

#include <charconv>

namespace pcc {

Statement make_statement(int function, int a, int b) {
  Statement s;
  s.function = static_cast<std::uint8_t>(function);
  s.operands = {static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b)};
  return s;
}

Kind Program::kind_of(int i) const {
  if (i < num_inputs()) return inputs[static_cast<std::size_t>(i)];
  return statements[static_cast<std::size_t>(i - num_inputs())].fn().result();
}

bool Program::well_formed() const {
  if (inputs.empty() || inputs.size() > 3) return false;
  for (int i = 0; i < length(); ++i) {
    const Statement& s = statements[static_cast<std::size_t>(i)];
    if (s.function >= kNumFunctions) return false;
    const int defined = num_inputs() + i;
    for (int j = 0; j < s.arity(); ++j) {
      const int operand = s.operands[static_cast<std::size_t>(j)];
      if (operand >= defined || kind_of(operand) != s.fn().operand(j)) return false;
    }
  }
  return true;
}

namespace {

class Scanner {
 public:
  explicit Scanner(std::string_view text) : text_(text) {}

  bool done() const { return pos_ >= text_.size(); }
  char peek() const { return done() ? '\0' : text_[pos_]; }
  std::size_t pos() const { return pos_; }

  // Reads up to the next ',' / '|' / ';' or end.
  std::string_view token() {
    const std::size_t start = pos_;
    while (!done() && text_[pos_] != ',' && text_[pos_] != '|' && text_[pos_] != ';') ++pos_;
    return text_.substr(start, pos_ - start);
  }

  void advance() { ++pos_; }

  [[noreturn]] void fail(std::size_t at, const std::string& what) const {
    int line = 1, column = 1;
    for (std::size_t i = 0; i < at && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError(line, column, what);
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Program parse_program(std::string_view text) {
  Scanner in(text);
  Program program;

  for (;;) {
    const std::size_t at = in.pos();
    const auto kind = parse_kind(in.token());
    if (!kind) in.fail(at, "expected INT or LIST");
    program.inputs.push_back(*kind);
    if (in.peek() != ';') break;
    in.advance();
  }
  if (program.inputs.size() > 3) in.fail(0, "at most 3 inputs");

  while (!in.done()) {
    if (in.peek() != '|') in.fail(in.pos(), "expected '|'");
    in.advance();

    std::size_t at = in.pos();
    const std::string_view op_text = in.token();
    const auto op = parse_operator(op_text);
    if (!op) in.fail(at, "unknown operator '" + std::string(op_text) + "'");
    const OperatorInfo& info = operator_info(*op);

    std::optional<Lambda> lam;
    if (info.lambda) {
      if (in.peek() != ',') in.fail(in.pos(), "expected lambda");
      in.advance();
      at = in.pos();
      const std::string_view lam_text = in.token();
      lam = parse_lambda(lam_text);
      if (!lam || lambda_kind(*lam) != *info.lambda)
        in.fail(at, "invalid lambda '" + std::string(lam_text) + "' for " + std::string(info.name));
    }

    Statement s;
    s.function = static_cast<std::uint8_t>(*function_id(*op, lam));
    for (int j = 0; j < info.arity; ++j) {
      if (in.peek() != ',') in.fail(in.pos(), "expected operand");
      in.advance();
      at = in.pos();
      const std::string_view num = in.token();
      unsigned value = 0;
      const auto [end, ec] = std::from_chars(num.data(), num.data() + num.size(), value);
      if (num.empty() || ec != std::errc() || end != num.data() + num.size() || value > 255)
        in.fail(at, "bad operand '" + std::string(num) + "'");
      s.operands[static_cast<std::size_t>(j)] = static_cast<std::uint8_t>(value);
    }
    if (in.peek() == ',') in.fail(in.pos(), "too many operands");
    program.statements.push_back(s);
  }
  return program;
}

std::string format_program(const Program& program) {
  std::string out;
  for (std::size_t i = 0; i < program.inputs.size(); ++i) {
    if (i) out += ';';
    out += kind_name(program.inputs[i]);
  }
  for (const Statement& s : program.statements) {
    out += '|';
    out += s.fn().name();
    for (int j = 0; j < s.arity(); ++j) {
      out += ',';
      out += std::to_string(s.operands[static_cast<std::size_t>(j)]);
    }
  }
  return out;
}

Outcome<std::vector<Value>> trace_program(const Program& program, std::span<const Value> inputs) {
  if (inputs.size() != program.inputs.size()) return Errc::Malformed;
  std::vector<Value> values(inputs.begin(), inputs.end());
  for (std::size_t i = 0; i < inputs.size(); ++i)
    if (values[i].kind() != program.inputs[i]) return Errc::Malformed;
  values.reserve(inputs.size() + program.statements.size());
  for (const Statement& s : program.statements) {
    const FunctionClass& fc = s.fn();
    for (int j = 0; j < fc.arity(); ++j) {
      const std::size_t operand = s.operands[static_cast<std::size_t>(j)];
      if (operand >= values.size() || values[operand].kind() != fc.operand(j)) return Errc::Malformed;
    }
    const Value& a = values[s.operands[0]];
    const Value& b = values[fc.arity() == 2 ? s.operands[1] : s.operands[0]];
    auto result = apply_function(s.function, a, b);
    if (!result) return result.fault();
    values.push_back(*result);
  }
  return values;
}

Outcome<Value> run_program(const Program& program, std::span<const Value> inputs) {
  if (program.statements.empty()) return Errc::Malformed;
  auto values = trace_program(program, inputs);
  if (!values) return values.fault();
  return values->back();
}

}  // namespace pcc
