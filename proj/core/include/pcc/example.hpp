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

#include <nlohmann/json.hpp>
#include <vector>

#include "pcc/dsl.hpp"

namespace pcc {

struct Example {
  std::vector<Value> inputs;
  Value output;

  friend bool operator==(const Example&, const Example&) = default;
};

// JSON number -> INT, JSON array -> LIST. Throws Error(CorruptFile) on
// anything else or on out-of-domain content.
Value value_from_json(const nlohmann::json& j);
nlohmann::json value_to_json(const Value& v);

Example example_from_json(const nlohmann::json& j);
nlohmann::json example_to_json(const Example& ex);

}  // namespace pcc
