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

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "pcc/datagen.hpp"

namespace pcc {

// JSON-lines corpus: manifest line {"k","max_len","seed","version"} followed
// by one {"examples": [...], "program": "<text>"} record per line.
void write_dataset(std::ostream& out, const Dataset& dataset);
void write_dataset(const std::filesystem::path& path, const Dataset& dataset);
Dataset read_dataset(std::istream& in);
Dataset read_dataset(const std::filesystem::path& path);

// A synthesis problem: examples plus the optional ground-truth program.
struct Problem {
  std::vector<Example> examples;
  std::optional<Program> truth;
};

// Reads dataset files as well as bare JSON-lines of {"examples": [...]}
// objects; a manifest line, if present, is skipped.
std::vector<Problem> read_problems(const std::filesystem::path& path);

}  // namespace pcc
