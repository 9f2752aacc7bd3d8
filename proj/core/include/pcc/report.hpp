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
#include <filesystem>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pcc/dataset_io.hpp"
#include "pcc/search.hpp"

namespace pcc {

// One line of a synth results file.
struct ResultRecord {
  bool solved = false;
  std::optional<Program> program;
  double time_s = 0;
  long long nodes = 0;
  int restarts = 0;
};

ResultRecord make_record(const SearchResult& result);
nlohmann::json record_to_json(const ResultRecord& record);
ResultRecord record_from_json(const nlohmann::json& j);
void write_results(const std::filesystem::path& path, std::span<const ResultRecord> records);
std::vector<ResultRecord> read_results(const std::filesystem::path& path);

// ------------------------------------------------------------------ curves

// Percent of problems solved within each threshold (seconds).
std::vector<double> solved_ratio_curve(std::span<const ResultRecord> results, std::span<const double> thresholds);

// Smallest time at which the solved percentage reaches each ratio, or nullopt.
std::vector<std::optional<double>> time_to_ratio(std::span<const ResultRecord> results,
                                                 std::span<const double> ratios);

inline constexpr std::array<double, 10> kDefaultRatios = {5, 10, 20, 40, 60, 70, 80, 90, 95, 99};
inline constexpr std::array<double, 12> kDefaultThresholds = {0.1, 0.5, 1, 2, 5, 10, 20, 30, 60, 120, 300, 600};

// ------------------------------------------------------------------ lengths

// Rows: ground-truth length; columns: predicted length; cells: percent of the
// solved problems of that row.
struct LengthMatrix {
  std::map<int, std::map<int, int>> counts;

  std::map<int, std::map<int, double>> percentages() const;
};

LengthMatrix length_matrix(std::span<const ResultRecord> results, std::span<const Program> truths);

// ------------------------------------------------------------------ CIDEr

// Document frequencies of function-class n-grams (n = 1..4).
struct CorpusStats {
  int documents = 0;
  std::array<std::map<std::vector<std::uint8_t>, int>, 4> df;
};

CorpusStats corpus_stats(std::span<const Program> corpus);

// tf-idf cosine per n, averaged over the n for which either program has an
// n-gram, times 10. Errc::EmptyProgram for an empty program.
double cider_score(const Program& predicted, const Program& truth, const CorpusStats& stats);

// ------------------------------------------------------------------ failures

struct FunctionFailure {
  int function = 0;
  int failures = 0;  // occurrences in unsolved problems' ground truth
  int total = 0;
  double ratio() const { return total == 0 ? 0.0 : static_cast<double>(failures) / total; }
};

// Functions present in the ground truth, by failure ratio descending, ties by
// function index.
std::vector<FunctionFailure> function_failure_stats(std::span<const ResultRecord> results,
                                                    std::span<const Program> truths);

// ------------------------------------------------------------------ report

struct ReportOptions {
  bool zero_times = false;
  std::vector<double> thresholds{kDefaultThresholds.begin(), kDefaultThresholds.end()};
  std::vector<double> ratios{kDefaultRatios.begin(), kDefaultRatios.end()};
};

struct EvalReport {
  nlohmann::json json;
  int soundness_failures = 0;
};

// Results are matched to problems by position. Solved programs are re-run on
// the problem's examples; mismatches count as soundness failures.
// Errc::InvalidArgument when counts differ or a problem lacks ground truth.
EvalReport build_report(std::span<const ResultRecord> results, std::span<const Problem> problems,
                        const CorpusStats& corpus, const ReportOptions& options = {});

// Plain-text rendering of the main tables.
std::string format_report(const nlohmann::json& report);

}  // namespace pcc
