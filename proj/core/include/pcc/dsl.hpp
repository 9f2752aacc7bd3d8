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
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "pcc/error.hpp"

namespace pcc {

inline constexpr int kMinInt = -256;
inline constexpr int kMaxInt = 255;
inline constexpr int kMaxListLength = 20;

constexpr bool in_range(long long x) { return x >= kMinInt && x <= kMaxInt; }

enum class Kind : std::uint8_t { Int = 0, List = 1 };

std::string_view kind_name(Kind kind);
std::optional<Kind> parse_kind(std::string_view text);

// An integer or a list of integers inside the bounded domain. Construction
// through the factories enforces the domain invariants; out-of-domain
// results are produced as Errc::OutOfRange by the Outcome factories.
class Value {
 public:
  Value() = default;

  static Value integer(int x);
  static Value list(std::span<const int> xs);
  static Value list(std::initializer_list<int> xs) { return list(std::span<const int>(xs.begin(), xs.size())); }

  static Outcome<Value> checked_integer(long long x);
  static Outcome<Value> checked_list(std::span<const int> xs);

  Kind kind() const noexcept { return static_cast<Kind>(kind_); }
  bool is_int() const noexcept { return kind() == Kind::Int; }
  bool is_list() const noexcept { return kind() == Kind::List; }

  int as_int() const noexcept { return data_[0]; }
  int size() const noexcept { return size_; }
  int operator[](int i) const noexcept { return data_[static_cast<std::size_t>(i)]; }

  std::uint64_t hash() const noexcept;
  std::string to_string() const;

  friend bool operator==(const Value& a, const Value& b) noexcept {
    return a.kind_ == b.kind_ && a.size_ == b.size_ && a.data_ == b.data_;
  }

 private:
  std::uint8_t kind_ = 0;
  std::uint8_t size_ = 0;
  std::array<std::int16_t, kMaxListLength> data_{};
};

enum class Lambda : std::uint8_t {
  Inc, Dec, Double, Half, Negate, Square, Triple, Third, Quadruple, Quarter,
  Positive, Negative, Even, Odd,
  Add, Sub, Mul, Min, Max,
};
inline constexpr int kNumLambdas = 19;

enum class LambdaKind : std::uint8_t { IntToInt, IntToBool, IntIntToInt };

LambdaKind lambda_kind(Lambda lam);
int lambda_arity(Lambda lam);
std::string_view lambda_name(Lambda lam);
std::optional<Lambda> parse_lambda(std::string_view text);

// Result of a lambda before range checking. Predicates yield 0/1 with
// is_bool set.
struct LambdaValue {
  long long value = 0;
  bool is_bool = false;

  friend bool operator==(const LambdaValue&, const LambdaValue&) = default;
};

// Division truncates toward zero; parity uses the mathematical remainder.
LambdaValue eval_lambda(Lambda lam, std::span<const int> args);

enum class Operator : std::uint8_t {
  Head, Last, Take, Drop, Access, Minimum, Maximum, Reverse, Sort, Sum,
  Map, Filter, Count, ZipWith, ScanL1,
};
inline constexpr int kNumOperators = 15;

struct OperatorInfo {
  std::string_view name;
  std::array<Kind, 2> operands;
  int arity;
  std::optional<LambdaKind> lambda;
  Kind result;
};

const OperatorInfo& operator_info(Operator op);
std::optional<Operator> parse_operator(std::string_view text);

// Operator paired with its lambda (if any); 38 members in table order.
struct FunctionClass {
  Operator op;
  std::optional<Lambda> lambda;

  int arity() const { return operator_info(op).arity; }
  Kind operand(int i) const { return operator_info(op).operands[static_cast<std::size_t>(i)]; }
  Kind result() const { return operator_info(op).result; }
  std::string name() const;

  friend bool operator==(const FunctionClass&, const FunctionClass&) = default;
};

inline constexpr int kNumFunctions = 38;

std::span<const FunctionClass> function_classes();
const FunctionClass& function_class(int id);
std::optional<int> function_id(Operator op, std::optional<Lambda> lam);

// Kind-checked application. Errc::TypeMismatch when the arguments or lambda
// do not fit the operator signature.
Outcome<Value> apply_operator(Operator op, std::optional<Lambda> lam, std::span<const Value> args);

// Unchecked application of a function class to operands whose kinds are
// already known to match. `second` is ignored for unary functions.
Outcome<Value> apply_function(int function, const Value& first, const Value& second);

}  // namespace pcc
