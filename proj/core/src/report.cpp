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

#include "pcc/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace pcc {

namespace {

using Gram = std::vector<std::uint8_t>;
using GramCounts = std::map<Gram, int>;

std::vector<std::uint8_t> tokens(const Program& p) {
  std::vector<std::uint8_t> out;
  for (const Statement& s : p.statements) out.push_back(s.function);
  return out;
}

GramCounts ngrams(const std::vector<std::uint8_t>& toks, int n) {
  GramCounts counts;
  for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= toks.size(); ++i)
    ++counts[Gram(toks.begin() + static_cast<std::ptrdiff_t>(i), toks.begin() + static_cast<std::ptrdiff_t>(i) + n)];
  return counts;
}

std::map<Gram, double> tfidf(const GramCounts& counts, const std::map<Gram, int>& df, int documents) {
  int total = 0;
  for (const auto& [g, c] : counts) total += c;
  std::map<Gram, double> out;
  for (const auto& [g, c] : counts) {
    const auto it = df.find(g);
    const int f = it == df.end() ? 0 : it->second;
    const double idf = std::log(static_cast<double>(std::max(documents, 1)) / std::max(1, f));
    out[g] = static_cast<double>(c) / total * idf;
  }
  return out;
}

double norm(const std::map<Gram, double>& v) {
  double s = 0;
  for (const auto& [g, x] : v) s += x * x;
  return std::sqrt(s);
}

double round_to(double x, double unit) { return std::round(x / unit) * unit; }

}  // namespace

// ------------------------------------------------------------------ records

ResultRecord make_record(const SearchResult& result) {
  ResultRecord r;
  r.solved = result.status == SearchStatus::Solved;
  r.program = result.program;
  r.time_s = result.stats.seconds;
  r.nodes = result.stats.nodes_expanded;
  r.restarts = result.stats.restarts;
  return r;
}

nlohmann::json record_to_json(const ResultRecord& record) {
  return {{"status", record.solved ? "solved" : "timeout"},
          {"program", record.solved && record.program ? format_program(*record.program) : ""},
          {"time_s", record.time_s},
          {"nodes", record.nodes},
          {"restarts", record.restarts}};
}

ResultRecord record_from_json(const nlohmann::json& j) {
  ResultRecord r;
  try {
    const std::string status = j.at("status").get<std::string>();
    if (status != "solved" && status != "timeout") throw Error(Errc::CorruptFile, "unknown status " + status);
    r.solved = status == "solved";
    if (r.solved) r.program = parse_program(j.at("program").get<std::string>());
    r.time_s = j.value("time_s", 0.0);
    r.nodes = j.value("nodes", 0LL);
    r.restarts = j.value("restarts", 0);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::CorruptFile, std::string("result record: ") + e.what());
  }
  return r;
}

void write_results(const std::filesystem::path& path, std::span<const ResultRecord> records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::Io, "cannot write " + path.string());
  for (const ResultRecord& r : records) out << record_to_json(r).dump() << '\n';
  if (!out) throw Error(Errc::Io, "write failed for " + path.string());
}

std::vector<ResultRecord> read_results(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot read " + path.string());
  std::vector<ResultRecord> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(Errc::CorruptFile, "line " + std::to_string(line_no) + ": " + e.what());
    }
    out.push_back(record_from_json(j));
  }
  return out;
}

// ------------------------------------------------------------------ curves

std::vector<double> solved_ratio_curve(std::span<const ResultRecord> results, std::span<const double> thresholds) {
  std::vector<double> out;
  for (double t : thresholds) {
    const auto solved = std::count_if(results.begin(), results.end(),
                                      [t](const ResultRecord& r) { return r.solved && r.time_s <= t; });
    out.push_back(results.empty() ? 0.0 : 100.0 * static_cast<double>(solved) / static_cast<double>(results.size()));
  }
  return out;
}

std::vector<std::optional<double>> time_to_ratio(std::span<const ResultRecord> results,
                                                 std::span<const double> ratios) {
  std::vector<double> times;
  for (const ResultRecord& r : results)
    if (r.solved) times.push_back(r.time_s);
  std::sort(times.begin(), times.end());
  std::vector<std::optional<double>> out;
  const auto n = static_cast<double>(results.size());
  for (double ratio : ratios) {
    const auto needed = static_cast<std::size_t>(std::max(1.0, std::ceil(ratio * n / 100.0 - 1e-9)));
    if (results.empty() || needed > times.size())
      out.emplace_back(std::nullopt);
    else
      out.emplace_back(times[needed - 1]);
  }
  return out;
}

// ------------------------------------------------------------------ lengths

std::map<int, std::map<int, double>> LengthMatrix::percentages() const {
  std::map<int, std::map<int, double>> out;
  for (const auto& [row, cols] : counts) {
    int total = 0;
    for (const auto& [col, c] : cols) total += c;
    for (const auto& [col, c] : cols) out[row][col] = 100.0 * c / total;
  }
  return out;
}

LengthMatrix length_matrix(std::span<const ResultRecord> results, std::span<const Program> truths) {
  if (results.size() != truths.size()) throw Error(Errc::InvalidArgument, "results and truths differ in count");
  LengthMatrix m;
  for (std::size_t i = 0; i < results.size(); ++i)
    if (results[i].solved && results[i].program) ++m.counts[truths[i].length()][results[i].program->length()];
  return m;
}

// ------------------------------------------------------------------ CIDEr

CorpusStats corpus_stats(std::span<const Program> corpus) {
  CorpusStats stats;
  stats.documents = static_cast<int>(corpus.size());
  for (const Program& p : corpus) {
    const auto toks = tokens(p);
    for (int n = 1; n <= 4; ++n)
      for (const auto& [g, c] : ngrams(toks, n)) ++stats.df[static_cast<std::size_t>(n - 1)][g];
  }
  return stats;
}

double cider_score(const Program& predicted, const Program& truth, const CorpusStats& stats) {
  if (predicted.length() == 0 || truth.length() == 0) throw Error(Errc::EmptyProgram, "CIDEr of an empty program");
  const auto a = tokens(predicted);
  const auto b = tokens(truth);
  double sum = 0;
  int orders = 0;
  for (int n = 1; n <= 4; ++n) {
    const GramCounts ga = ngrams(a, n);
    const GramCounts gb = ngrams(b, n);
    if (ga.empty() && gb.empty()) continue;
    ++orders;
    if (ga.empty() || gb.empty()) continue;
    const auto& df = stats.df[static_cast<std::size_t>(n - 1)];
    const auto va = tfidf(ga, df, stats.documents);
    const auto vb = tfidf(gb, df, stats.documents);
    const double na = norm(va);
    const double nb = norm(vb);
    if (na == 0 || nb == 0) {
      // Every n-gram occurs in every document: fall back to exact agreement.
      sum += ga == gb ? 1.0 : 0.0;
      continue;
    }
    double dot = 0;
    for (const auto& [g, x] : va) {
      const auto it = vb.find(g);
      if (it != vb.end()) dot += x * it->second;
    }
    sum += dot / (na * nb);
  }
  return std::clamp(10.0 * sum / orders, 0.0, 10.0);
}

// ------------------------------------------------------------------ failures

std::vector<FunctionFailure> function_failure_stats(std::span<const ResultRecord> results,
                                                    std::span<const Program> truths) {
  if (results.size() != truths.size()) throw Error(Errc::InvalidArgument, "results and truths differ in count");
  std::vector<FunctionFailure> table(kNumFunctions);
  for (int f = 0; f < kNumFunctions; ++f) table[static_cast<std::size_t>(f)].function = f;
  for (std::size_t i = 0; i < results.size(); ++i) {
    for (const Statement& s : truths[i].statements) {
      auto& row = table[s.function];
      ++row.total;
      if (!results[i].solved) ++row.failures;
    }
  }
  std::erase_if(table, [](const FunctionFailure& f) { return f.total == 0; });
  std::stable_sort(table.begin(), table.end(),
                   [](const FunctionFailure& x, const FunctionFailure& y) { return x.ratio() > y.ratio(); });
  return table;
}

// ------------------------------------------------------------------ report

EvalReport build_report(std::span<const ResultRecord> input, std::span<const Problem> problems,
                        const CorpusStats& corpus, const ReportOptions& options) {
  if (input.size() != problems.size())
    throw Error(Errc::InvalidArgument, std::to_string(input.size()) + " results for " +
                                           std::to_string(problems.size()) + " problems");
  std::vector<ResultRecord> results(input.begin(), input.end());
  std::vector<Program> truths;
  for (std::size_t i = 0; i < problems.size(); ++i) {
    if (!problems[i].truth) throw Error(Errc::InvalidArgument, "problem " + std::to_string(i) + " has no program");
    truths.push_back(*problems[i].truth);
  }
  if (options.zero_times)
    for (ResultRecord& r : results) r.time_s = 0;

  EvalReport report;
  auto rows = nlohmann::json::array();
  double cider_sum = 0;
  int solved = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const ResultRecord& r = results[i];
    nlohmann::json row = record_to_json(r);
    row["truth"] = format_program(truths[i]);
    if (r.solved) {
      ++solved;
      if (!r.program || !verify_solution(*r.program, problems[i].examples)) {
        ++report.soundness_failures;
        row["sound"] = false;
      } else {
        const double c = cider_score(*r.program, truths[i], corpus);
        cider_sum += c;
        row["cider"] = c;
      }
    }
    rows.push_back(std::move(row));
  }

  const auto curve = solved_ratio_curve(results, options.thresholds);
  for (std::size_t i = 1; i < curve.size(); ++i)
    if (options.thresholds[i] >= options.thresholds[i - 1] && curve[i] < curve[i - 1])
      throw std::logic_error("solved-ratio curve is not monotone");
  auto curve_json = nlohmann::json::array();
  for (std::size_t i = 0; i < curve.size(); ++i)
    curve_json.push_back({{"t", options.thresholds[i]}, {"percent", curve[i]}});

  auto ratio_json = nlohmann::json::array();
  const auto times = time_to_ratio(results, options.ratios);
  for (std::size_t i = 0; i < times.size(); ++i)
    ratio_json.push_back({{"ratio", options.ratios[i]},
                          {"time_s", times[i] ? nlohmann::json(*times[i]) : nlohmann::json(nullptr)}});

  auto matrix_json = nlohmann::json::array();
  for (const auto& [len, cols] : length_matrix(results, truths).percentages()) {
    double row_sum = 0;
    nlohmann::json cells = nlohmann::json::object();
    for (const auto& [col, pct] : cols) {
      row_sum += pct;
      cells[std::to_string(col)] = pct;
    }
    if (std::abs(row_sum - 100.0) > 0.1) throw std::logic_error("length-matrix row does not sum to 100");
    matrix_json.push_back({{"truth_length", len}, {"percent", cells}});
  }

  auto failure_json = nlohmann::json::array();
  for (const FunctionFailure& f : function_failure_stats(results, truths))
    failure_json.push_back({{"function", function_class(f.function).name()},
                            {"failures", f.failures},
                            {"total", f.total},
                            {"ratio", f.ratio()}});

  const int sound = solved - report.soundness_failures;
  report.json = {{"problems", results.size()},
                 {"solved", solved},
                 {"solved_percent", results.empty() ? 0.0 : 100.0 * solved / static_cast<double>(results.size())},
                 {"curve", std::move(curve_json)},
                 {"time_to_ratio", std::move(ratio_json)},
                 {"length_matrix", std::move(matrix_json)},
                 {"cider_mean", sound > 0 ? nlohmann::json(cider_sum / sound) : nlohmann::json(nullptr)},
                 {"function_failures", std::move(failure_json)},
                 {"soundness_failures", report.soundness_failures},
                 {"results", std::move(rows)}};
  return report;
}

std::string format_report(const nlohmann::json& report) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(1);
  os << "solved " << report.at("solved").get<int>() << "/" << report.at("problems").get<int>() << " ("
     << report.at("solved_percent").get<double>() << "%)\n";
  os << "\ntime to ratio\n";
  for (const auto& row : report.at("time_to_ratio")) {
    os << "  " << std::setw(5) << row.at("ratio").get<double>() << "%  ";
    if (row.at("time_s").is_null())
      os << "-\n";
    else
      os << std::setprecision(3) << row.at("time_s").get<double>() << std::setprecision(1) << "s\n";
  }
  os << "\nsolved within\n";
  for (const auto& row : report.at("curve"))
    os << "  " << std::setw(7) << row.at("t").get<double>() << "s  " << row.at("percent").get<double>() << "%\n";
  os << "\nlength matrix (truth -> predicted %)\n";
  for (const auto& row : report.at("length_matrix")) {
    os << "  " << row.at("truth_length").get<int>() << ":";
    for (const auto& [col, pct] : row.at("percent").items())
      os << "  " << col << "=" << round_to(pct.get<double>(), 0.1);
    os << "\n";
  }
  os << "\nCIDEr mean ";
  if (report.at("cider_mean").is_null())
    os << "-\n";
  else
    os << std::setprecision(3) << report.at("cider_mean").get<double>() << "\n" << std::setprecision(1);
  os << "\nfunction failure ratio\n";
  for (const auto& row : report.at("function_failures"))
    os << "  " << std::left << std::setw(12) << row.at("function").get<std::string>() << std::right << " "
       << std::setprecision(3) << row.at("ratio").get<double>() << " (" << row.at("failures").get<int>() << "/"
       << row.at("total").get<int>() << ")\n";
  return os.str();
}

}  // namespace pcc
