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

#include "pcc/dataset_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <string>

namespace pcc {

namespace {

nlohmann::json parse_line(const std::string& line, int line_no) {
  try {
    return nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::CorruptFile, "line " + std::to_string(line_no) + ": " + e.what());
  }
}

bool is_manifest(const nlohmann::json& j) { return j.is_object() && j.contains("version") && !j.contains("examples"); }

std::vector<Example> examples_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw Error(Errc::CorruptFile, "\"examples\" must be a non-empty array");
  std::vector<Example> out;
  for (const auto& e : j) out.push_back(example_from_json(e));
  return out;
}

}  // namespace

void write_dataset(std::ostream& out, const Dataset& dataset) {
  const nlohmann::json manifest = {{"version", dataset.manifest.version},
                                   {"max_len", dataset.manifest.max_len},
                                   {"k", dataset.manifest.k},
                                   {"seed", dataset.manifest.seed}};
  out << manifest.dump() << '\n';
  for (const DatasetRecord& r : dataset.records) {
    auto examples = nlohmann::json::array();
    for (const Example& ex : r.examples) examples.push_back(example_to_json(ex));
    const nlohmann::json line = {{"program", format_program(r.program)}, {"examples", std::move(examples)}};
    out << line.dump() << '\n';
  }
}

void write_dataset(const std::filesystem::path& path, const Dataset& dataset) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::Io, "cannot write " + path.string());
  write_dataset(out, dataset);
  if (!out) throw Error(Errc::Io, "write failed for " + path.string());
}

Dataset read_dataset(std::istream& in) {
  Dataset data;
  std::string line;
  int line_no = 0;
  bool have_manifest = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto j = parse_line(line, line_no);
    if (!have_manifest) {
      if (!is_manifest(j)) throw Error(Errc::CorruptFile, "line 1 must be the manifest");
      if (j.value("version", 0) != 1) throw Error(Errc::VersionMismatch, "unsupported dataset version");
      data.manifest.version = 1;
      data.manifest.max_len = j.value("max_len", 0);
      data.manifest.k = j.value("k", 0);
      data.manifest.seed = j.value("seed", std::uint64_t{0});
      have_manifest = true;
      continue;
    }
    if (!j.contains("program") || !j["program"].is_string())
      throw Error(Errc::CorruptFile, "line " + std::to_string(line_no) + ": record without program");
    DatasetRecord record;
    record.program = parse_program(j["program"].get<std::string>());
    record.examples = examples_from_json(j.at("examples"));
    data.records.push_back(std::move(record));
  }
  if (!have_manifest) throw Error(Errc::CorruptFile, "empty dataset file");
  return data;
}

Dataset read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot read " + path.string());
  return read_dataset(in);
}

std::vector<Problem> read_problems(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot read " + path.string());
  std::vector<Problem> problems;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto j = parse_line(line, line_no);
    if (is_manifest(j)) continue;
    if (!j.is_object() || !j.contains("examples"))
      throw Error(Errc::CorruptFile, "line " + std::to_string(line_no) + ": expected {\"examples\": [...]}");
    Problem p;
    p.examples = examples_from_json(j["examples"]);
    if (j.contains("program") && j["program"].is_string()) p.truth = parse_program(j["program"].get<std::string>());
    problems.push_back(std::move(p));
  }
  return problems;
}

}  // namespace pcc
