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

#include "pcc/example.hpp"

namespace pcc {

namespace {

int int_from_json(const nlohmann::json& j) {
  if (!j.is_number_integer()) throw Error(Errc::CorruptFile, "expected an integer, got " + j.dump());
  const auto x = j.get<long long>();
  if (!in_range(x)) throw Error(Errc::CorruptFile, "integer outside [-256, 255]: " + j.dump());
  return static_cast<int>(x);
}

}  // namespace

Value value_from_json(const nlohmann::json& j) {
  if (j.is_array()) {
    if (j.size() > static_cast<std::size_t>(kMaxListLength))
      throw Error(Errc::CorruptFile, "list longer than 20 elements");
    std::vector<int> xs;
    xs.reserve(j.size());
    for (const auto& e : j) xs.push_back(int_from_json(e));
    return Value::list(xs);
  }
  return Value::integer(int_from_json(j));
}

nlohmann::json value_to_json(const Value& v) {
  if (v.is_int()) return v.as_int();
  auto arr = nlohmann::json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Example example_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("inputs") || !j.contains("output") || !j["inputs"].is_array())
    throw Error(Errc::CorruptFile, "example must be {\"inputs\": [...], \"output\": ...}");
  Example ex;
  for (const auto& input : j["inputs"]) ex.inputs.push_back(value_from_json(input));
  if (ex.inputs.empty() || ex.inputs.size() > 3) throw Error(Errc::CorruptFile, "an example has 1..3 inputs");
  ex.output = value_from_json(j["output"]);
  return ex;
}

nlohmann::json example_to_json(const Example& ex) {
  auto inputs = nlohmann::json::array();
  for (const Value& v : ex.inputs) inputs.push_back(value_to_json(v));
  return {{"inputs", std::move(inputs)}, {"output", value_to_json(ex.output)}};
}

}  // namespace pcc
