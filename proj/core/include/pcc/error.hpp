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

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

namespace pcc {

// Error codes shared by the interpreter (as Outcome faults) and by the
// throwing API surface (as Error exceptions).
enum class Errc {
  EmptyInput,
  OutOfRange,
  IndexOutOfBounds,
  Malformed,
  TypeMismatch,
  NullOperand,
  NoFreeSlot,
  NotLive,
  InconsistentExamples,
  ParseError,
  Infeasible,
  GenerationFailed,
  TooManyLiveVars,
  DimensionMismatch,
  VersionMismatch,
  VocabMismatch,
  CorruptFile,
  EmptyProgram,
  Io,
  InvalidArgument,
};

std::string_view errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& what)
      : Error(Errc::ParseError, std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

// Either a value or an error code. Used on hot paths (interpreter, search
// edges, data generation) where failures are routine and not exceptional.
template <class T>
class Outcome {
 public:
  Outcome(T value) : data_(std::move(value)) {}  // NOLINT(google-explicit-constructor)
  Outcome(Errc fault) : data_(fault) {}          // NOLINT(google-explicit-constructor)

  bool ok() const noexcept { return std::holds_alternative<T>(data_); }
  explicit operator bool() const noexcept { return ok(); }

  Errc fault() const { return std::get<Errc>(data_); }

  const T& value() const& {
    if (!ok()) throw Error(fault(), "outcome holds no value");
    return std::get<T>(data_);
  }
  T& value() & {
    if (!ok()) throw Error(fault(), "outcome holds no value");
    return std::get<T>(data_);
  }
  T&& value() && {
    if (!ok()) throw Error(fault(), "outcome holds no value");
    return std::get<T>(std::move(data_));
  }

  const T& operator*() const& { return std::get<T>(data_); }
  T& operator*() & { return std::get<T>(data_); }
  const T* operator->() const { return &std::get<T>(data_); }
  T* operator->() { return &std::get<T>(data_); }

 private:
  std::variant<T, Errc> data_;
};

}  // namespace pcc
