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

#include <string>
#include <vector>

#include "oracle.hpp"
#include "pcc/datagen.hpp"
#include "pcc/random.hpp"

namespace testing_support {

inline pcc::Value to_value(const oracle::Val& v) {
  if (!v.list) return pcc::Value::integer(static_cast<int>(v.xs[0]));
  std::vector<int> xs(v.xs.begin(), v.xs.end());
  return pcc::Value::list(xs);
}

inline oracle::Val to_oracle(const pcc::Value& v) {
  if (v.is_int()) return oracle::Val::i(v.as_int());
  std::vector<long long> xs;
  for (int i = 0; i < v.size(); ++i) xs.push_back(v[i]);
  return oracle::Val::l(xs);
}

// Lists with mixed lengths and magnitudes so that both overflowing and
// well-behaved executions occur.
inline oracle::Val random_list(pcc::Rng& rng) {
  const int len = static_cast<int>(rng.uniform_int(0, 20));
  const long long bound = std::vector<long long>{4, 16, 64, 256}[static_cast<std::size_t>(rng.uniform_int(0, 3))];
  std::vector<long long> xs;
  for (int i = 0; i < len; ++i) xs.push_back(std::clamp<long long>(rng.uniform_int(-bound, bound), -256, 255));
  return oracle::Val::l(xs);
}

inline std::vector<pcc::Example> examples_of(const pcc::Program& p, const std::vector<std::vector<pcc::Value>>& inputs) {
  std::vector<pcc::Example> out;
  for (const auto& in : inputs) out.push_back({in, pcc::run_program(p, in).value()});
  return out;
}

}  // namespace testing_support

namespace testing_support {

// The same program as oracle lines over creation-order indices.
inline std::vector<oracle::Line> to_oracle_lines(const pcc::Program& p) {
  static const std::vector<oracle::Fn> fns = oracle::functions();
  std::vector<oracle::Line> out;
  for (const pcc::Statement& s : p.statements) {
    oracle::Line line{fns[s.function], {}};
    for (int j = 0; j < s.arity(); ++j) line.operands.push_back(s.operands[static_cast<std::size_t>(j)]);
    out.push_back(line);
  }
  return out;
}

// Runs `p` with the oracle; every intermediate must stay in the domain.
inline std::optional<oracle::Val> oracle_run(const pcc::Program& p, const std::vector<pcc::Value>& inputs) {
  std::vector<oracle::Val> values;
  for (const auto& v : inputs) values.push_back(to_oracle(v));
  for (const oracle::Line& line : to_oracle_lines(p)) {
    std::vector<oracle::Val> args;
    for (int o : line.operands) {
      if (o >= static_cast<int>(values.size())) return std::nullopt;
      args.push_back(values[static_cast<std::size_t>(o)]);
    }
    if (args.size() != line.fn.operand_is_list.size()) return std::nullopt;
    for (std::size_t i = 0; i < args.size(); ++i)
      if (args[i].list != line.fn.operand_is_list[i]) return std::nullopt;
    auto r = oracle::call(line.fn, args);
    if (!r || !oracle::in_domain(*r)) return std::nullopt;
    values.push_back(*r);
  }
  if (values.size() == inputs.size()) return std::nullopt;
  return values.back();
}

}  // namespace testing_support
