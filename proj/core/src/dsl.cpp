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

#include "pcc/dsl.hpp"

#include <algorithm>
#include <vector>

namespace pcc {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::EmptyInput: return "EMPTY_INPUT";
    case Errc::OutOfRange: return "OUT_OF_RANGE";
    case Errc::IndexOutOfBounds: return "INDEX_OUT_OF_BOUNDS";
    case Errc::Malformed: return "MALFORMED";
    case Errc::TypeMismatch: return "TYPE_MISMATCH";
    case Errc::NullOperand: return "NULL_OPERAND";
    case Errc::NoFreeSlot: return "NO_FREE_SLOT";
    case Errc::NotLive: return "NOT_LIVE";
    case Errc::InconsistentExamples: return "INCONSISTENT_EXAMPLES";
    case Errc::ParseError: return "PARSE_ERROR";
    case Errc::Infeasible: return "INFEASIBLE";
    case Errc::GenerationFailed: return "GENERATION_FAILED";
    case Errc::TooManyLiveVars: return "TOO_MANY_LIVE_VARS";
    case Errc::DimensionMismatch: return "DIMENSION_MISMATCH";
    case Errc::VersionMismatch: return "VERSION_MISMATCH";
    case Errc::VocabMismatch: return "VOCAB_MISMATCH";
    case Errc::CorruptFile: return "CORRUPT_FILE";
    case Errc::EmptyProgram: return "EMPTY_PROGRAM";
    case Errc::Io: return "IO_ERROR";
    case Errc::InvalidArgument: return "INVALID_ARGUMENT";
  }
  return "UNKNOWN";
}

std::string_view kind_name(Kind kind) { return kind == Kind::Int ? "INT" : "LIST"; }

std::optional<Kind> parse_kind(std::string_view text) {
  if (text == "INT") return Kind::Int;
  if (text == "LIST") return Kind::List;
  return std::nullopt;
}

// ---------------------------------------------------------------- Value

Value Value::integer(int x) {
  if (!in_range(x)) throw Error(Errc::OutOfRange, "integer " + std::to_string(x));
  Value v;
  v.kind_ = static_cast<std::uint8_t>(Kind::Int);
  v.data_[0] = static_cast<std::int16_t>(x);
  return v;
}

Value Value::list(std::span<const int> xs) {
  auto checked = checked_list(xs);
  if (!checked) throw Error(checked.fault(), "list value outside the domain");
  return *checked;
}

Outcome<Value> Value::checked_integer(long long x) {
  if (!in_range(x)) return Errc::OutOfRange;
  Value v;
  v.kind_ = static_cast<std::uint8_t>(Kind::Int);
  v.data_[0] = static_cast<std::int16_t>(x);
  return v;
}

Outcome<Value> Value::checked_list(std::span<const int> xs) {
  if (xs.size() > static_cast<std::size_t>(kMaxListLength)) return Errc::OutOfRange;
  Value v;
  v.kind_ = static_cast<std::uint8_t>(Kind::List);
  v.size_ = static_cast<std::uint8_t>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!in_range(xs[i])) return Errc::OutOfRange;
    v.data_[i] = static_cast<std::int16_t>(xs[i]);
  }
  return v;
}

std::uint64_t Value::hash() const noexcept {
  // FNV-1a over kind, length and elements.
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t x) {
    h ^= x;
    h *= 1099511628211ULL;
  };
  mix(kind_);
  mix(size_);
  const int n = is_int() ? 1 : size_;
  for (int i = 0; i < n; ++i) mix(static_cast<std::uint16_t>(data_[static_cast<std::size_t>(i)]));
  return h;
}

std::string Value::to_string() const {
  if (is_int()) return std::to_string(as_int());
  std::string out = "[";
  for (int i = 0; i < size_; ++i) {
    if (i) out += ',';
    out += std::to_string(data_[static_cast<std::size_t>(i)]);
  }
  return out + "]";
}

// ---------------------------------------------------------------- lambdas

namespace {

constexpr std::array<std::string_view, kNumLambdas> kLambdaNames = {
    "+1", "-1", "*2", "/2", "*(-1)", "**2", "*3", "/3", "*4", "/4",
    ">0", "<0", "%2==0", "%2==1",
    "+", "-", "*", "MIN", "MAX",
};

inline long long unary_int(Lambda lam, long long x) {
  switch (lam) {
    case Lambda::Inc: return x + 1;
    case Lambda::Dec: return x - 1;
    case Lambda::Double: return x * 2;
    case Lambda::Half: return x / 2;
    case Lambda::Negate: return -x;
    case Lambda::Square: return x * x;
    case Lambda::Triple: return x * 3;
    case Lambda::Third: return x / 3;
    case Lambda::Quadruple: return x * 4;
    case Lambda::Quarter: return x / 4;
    default: return 0;
  }
}

inline bool predicate(Lambda lam, long long x) {
  switch (lam) {
    case Lambda::Positive: return x > 0;
    case Lambda::Negative: return x < 0;
    case Lambda::Even: return x % 2 == 0;
    case Lambda::Odd: return x % 2 != 0;
    default: return false;
  }
}

inline long long binary_int(Lambda lam, long long a, long long b) {
  switch (lam) {
    case Lambda::Add: return a + b;
    case Lambda::Sub: return a - b;
    case Lambda::Mul: return a * b;
    case Lambda::Min: return std::min(a, b);
    case Lambda::Max: return std::max(a, b);
    default: return 0;
  }
}

}  // namespace

LambdaKind lambda_kind(Lambda lam) {
  const auto i = static_cast<int>(lam);
  if (i < 10) return LambdaKind::IntToInt;
  if (i < 14) return LambdaKind::IntToBool;
  return LambdaKind::IntIntToInt;
}

int lambda_arity(Lambda lam) { return lambda_kind(lam) == LambdaKind::IntIntToInt ? 2 : 1; }

std::string_view lambda_name(Lambda lam) { return kLambdaNames[static_cast<std::size_t>(lam)]; }

std::optional<Lambda> parse_lambda(std::string_view text) {
  for (int i = 0; i < kNumLambdas; ++i)
    if (kLambdaNames[static_cast<std::size_t>(i)] == text) return static_cast<Lambda>(i);
  return std::nullopt;
}

LambdaValue eval_lambda(Lambda lam, std::span<const int> args) {
  if (static_cast<int>(args.size()) != lambda_arity(lam))
    throw Error(Errc::InvalidArgument, "lambda arity mismatch for " + std::string(lambda_name(lam)));
  switch (lambda_kind(lam)) {
    case LambdaKind::IntToInt: return {unary_int(lam, args[0]), false};
    case LambdaKind::IntToBool: return {predicate(lam, args[0]) ? 1 : 0, true};
    case LambdaKind::IntIntToInt: return {binary_int(lam, args[0], args[1]), false};
  }
  return {};
}

// ---------------------------------------------------------------- operators

namespace {

using K = Kind;
using LK = LambdaKind;

const std::array<OperatorInfo, kNumOperators> kOperators = {{
    {"HEAD", {K::List, K::List}, 1, std::nullopt, K::Int},
    {"LAST", {K::List, K::List}, 1, std::nullopt, K::Int},
    {"TAKE", {K::Int, K::List}, 2, std::nullopt, K::List},
    {"DROP", {K::Int, K::List}, 2, std::nullopt, K::List},
    {"ACCESS", {K::Int, K::List}, 2, std::nullopt, K::Int},
    {"MINIMUM", {K::List, K::List}, 1, std::nullopt, K::Int},
    {"MAXIMUM", {K::List, K::List}, 1, std::nullopt, K::Int},
    {"REVERSE", {K::List, K::List}, 1, std::nullopt, K::List},
    {"SORT", {K::List, K::List}, 1, std::nullopt, K::List},
    {"SUM", {K::List, K::List}, 1, std::nullopt, K::Int},
    {"MAP", {K::List, K::List}, 1, LK::IntToInt, K::List},
    {"FILTER", {K::List, K::List}, 1, LK::IntToBool, K::List},
    {"COUNT", {K::List, K::List}, 1, LK::IntToBool, K::Int},
    {"ZIPWITH", {K::List, K::List}, 2, LK::IntIntToInt, K::List},
    {"SCANL1", {K::List, K::List}, 1, LK::IntIntToInt, K::List},
}};

std::vector<FunctionClass> build_function_table() {
  std::vector<FunctionClass> table;
  for (int o = 0; o < kNumOperators; ++o) {
    const auto op = static_cast<Operator>(o);
    const auto& info = kOperators[static_cast<std::size_t>(o)];
    if (!info.lambda) {
      table.push_back({op, std::nullopt});
      continue;
    }
    for (int l = 0; l < kNumLambdas; ++l) {
      const auto lam = static_cast<Lambda>(l);
      if (lambda_kind(lam) == *info.lambda) table.push_back({op, lam});
    }
  }
  return table;
}

const std::vector<FunctionClass>& function_table() {
  static const std::vector<FunctionClass> table = build_function_table();
  return table;
}

// Scratch buffer for list results; values may leave the domain before the
// final range check.
struct ListBuffer {
  std::array<int, kMaxListLength> data{};
  int size = 0;

  void push(int x) { data[static_cast<std::size_t>(size++)] = x; }
  std::span<const int> view() const { return {data.data(), static_cast<std::size_t>(size)}; }
};

inline void load(const Value& v, ListBuffer& out) {
  out.size = v.size();
  for (int i = 0; i < out.size; ++i) out.data[static_cast<std::size_t>(i)] = v[i];
}

}  // namespace

const OperatorInfo& operator_info(Operator op) { return kOperators[static_cast<std::size_t>(op)]; }

std::optional<Operator> parse_operator(std::string_view text) {
  for (int o = 0; o < kNumOperators; ++o)
    if (kOperators[static_cast<std::size_t>(o)].name == text) return static_cast<Operator>(o);
  return std::nullopt;
}

std::string FunctionClass::name() const {
  std::string out(operator_info(op).name);
  if (lambda) {
    out += ',';
    out += lambda_name(*lambda);
  }
  return out;
}

std::span<const FunctionClass> function_classes() { return function_table(); }

const FunctionClass& function_class(int id) { return function_table().at(static_cast<std::size_t>(id)); }

std::optional<int> function_id(Operator op, std::optional<Lambda> lam) {
  const auto& table = function_table();
  for (std::size_t i = 0; i < table.size(); ++i)
    if (table[i].op == op && table[i].lambda == lam) return static_cast<int>(i);
  return std::nullopt;
}

Outcome<Value> apply_function(int function, const Value& first, const Value& second) {
  const FunctionClass& fc = function_table()[static_cast<std::size_t>(function)];
  ListBuffer buf;
  switch (fc.op) {
    case Operator::Head:
      if (first.size() == 0) return Errc::EmptyInput;
      return Value::checked_integer(first[0]);
    case Operator::Last:
      if (first.size() == 0) return Errc::EmptyInput;
      return Value::checked_integer(first[first.size() - 1]);
    case Operator::Take: {
      const int n = std::clamp(first.as_int(), 0, second.size());
      for (int i = 0; i < n; ++i) buf.push(second[i]);
      return Value::checked_list(buf.view());
    }
    case Operator::Drop: {
      const int n = std::clamp(first.as_int(), 0, second.size());
      for (int i = n; i < second.size(); ++i) buf.push(second[i]);
      return Value::checked_list(buf.view());
    }
    case Operator::Access: {
      const int i = first.as_int();
      if (i < 0 || i >= second.size()) return Errc::IndexOutOfBounds;
      return Value::checked_integer(second[i]);
    }
    case Operator::Minimum:
    case Operator::Maximum: {
      if (first.size() == 0) return Errc::EmptyInput;
      int best = first[0];
      for (int i = 1; i < first.size(); ++i)
        best = fc.op == Operator::Minimum ? std::min(best, first[i]) : std::max(best, first[i]);
      return Value::checked_integer(best);
    }
    case Operator::Reverse:
      for (int i = first.size() - 1; i >= 0; --i) buf.push(first[i]);
      return Value::checked_list(buf.view());
    case Operator::Sort:
      load(first, buf);
      std::sort(buf.data.begin(), buf.data.begin() + buf.size);
      return Value::checked_list(buf.view());
    case Operator::Sum: {
      long long total = 0;
      for (int i = 0; i < first.size(); ++i) total += first[i];
      return Value::checked_integer(total);
    }
    case Operator::Map:
      for (int i = 0; i < first.size(); ++i) {
        const long long y = unary_int(*fc.lambda, first[i]);
        if (!in_range(y)) return Errc::OutOfRange;
        buf.push(static_cast<int>(y));
      }
      return Value::checked_list(buf.view());
    case Operator::Filter:
      for (int i = 0; i < first.size(); ++i)
        if (predicate(*fc.lambda, first[i])) buf.push(first[i]);
      return Value::checked_list(buf.view());
    case Operator::Count: {
      int n = 0;
      for (int i = 0; i < first.size(); ++i) n += predicate(*fc.lambda, first[i]) ? 1 : 0;
      return Value::checked_integer(n);
    }
    case Operator::ZipWith: {
      const int n = std::min(first.size(), second.size());
      for (int i = 0; i < n; ++i) {
        const long long y = binary_int(*fc.lambda, first[i], second[i]);
        if (!in_range(y)) return Errc::OutOfRange;
        buf.push(static_cast<int>(y));
      }
      return Value::checked_list(buf.view());
    }
    case Operator::ScanL1: {
      if (first.size() == 0) return Value::checked_list(buf.view());
      long long acc = first[0];
      buf.push(static_cast<int>(acc));
      for (int i = 1; i < first.size(); ++i) {
        acc = binary_int(*fc.lambda, acc, first[i]);
        if (!in_range(acc)) return Errc::OutOfRange;
        buf.push(static_cast<int>(acc));
      }
      return Value::checked_list(buf.view());
    }
  }
  return Errc::Malformed;
}

Outcome<Value> apply_operator(Operator op, std::optional<Lambda> lam, std::span<const Value> args) {
  const auto id = function_id(op, lam);
  if (!id) return Errc::TypeMismatch;
  const FunctionClass& fc = function_class(*id);
  if (static_cast<int>(args.size()) != fc.arity()) return Errc::TypeMismatch;
  for (int i = 0; i < fc.arity(); ++i)
    if (args[static_cast<std::size_t>(i)].kind() != fc.operand(i)) return Errc::TypeMismatch;
  return apply_function(*id, args[0], fc.arity() == 2 ? args[1] : args[0]);
}

}  // namespace pcc
