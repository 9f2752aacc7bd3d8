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

// Acceptance checks. Each criterion prints one line:
//   criterion <n> PASS|FAIL <summary>
// Expensive artifacts (corpora, checkpoints, search results) are cached in
// --cache and reused when present.

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

#include "pcc/checkpoint.hpp"
#include "pcc/dataset_io.hpp"
#include "pcc/report.hpp"
#include "pcc/search.hpp"
#include "pcc/trainer.hpp"
#include "support/gradcheck.hpp"
#include "support/helpers.hpp"

namespace fs = std::filesystem;
using namespace pcc;
using testing_support::oracle_run;
using testing_support::to_oracle;
using testing_support::to_value;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Verdict {
  bool pass = false;
  std::string summary;
};

std::string fmt(double x, int digits = 2) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << x;
  return os.str();
}

void log(const std::string& msg) { std::cerr << "  " << msg << std::endl; }

// ------------------------------------------------------------------ settings

constexpr int kTrainPrograms = 60000;
constexpr std::uint64_t kTrainSeed = 11;
constexpr int kTestProblems = 100;
constexpr std::uint64_t kTestSeed = 12;
constexpr int kMaxLen = 4;
constexpr int kExamples = 5;
constexpr int kSlots = 6;
constexpr std::uint64_t kModelSeed = 1;
constexpr int kMaxEpochs = 40;
constexpr double kLongTimeout = 60;
constexpr double kShortTimeout = 10;

struct Context {
  fs::path cache;
  bool fresh = false;

  fs::path file(const std::string& name) const { return cache / name; }
  bool have(const std::string& name) const { return !fresh && fs::exists(file(name)); }
};

// ------------------------------------------------------------------ 1

std::vector<std::vector<Kind>> signatures() {
  std::vector<std::vector<Kind>> out;
  for (int n = 1; n <= 3; ++n)
    for (int mask = 0; mask < (1 << n); ++mask) {
      std::vector<Kind> s;
      for (int i = 0; i < n; ++i) s.push_back(mask >> i & 1 ? Kind::List : Kind::Int);
      out.push_back(s);
    }
  return out;
}

Verdict interpreter_oracle() {
  const auto start = Clock::now();
  Rng rng(101);
  long long programs = 0, runs = 0, mismatches = 0, failures = 0;
  for (const auto& sig : signatures()) {
    for (const Statement& stmt : valid_statements(sig)) {
      const Program p{sig, {stmt}};
      ++programs;
      for (int trial = 0; trial < 20; ++trial) {
        std::vector<Value> inputs;
        for (Kind k : sig) {
          if (k == Kind::List)
            inputs.push_back(to_value(testing_support::random_list(rng)));
          else
            inputs.push_back(Value::integer(static_cast<int>(
                rng.uniform01() < 0.7 ? rng.uniform_int(-3, 22) : rng.uniform_int(kMinInt, kMaxInt))));
        }
        ++runs;
        const auto got = run_program(p, inputs);
        const auto want = oracle_run(p, inputs);
        if (!got) ++failures;
        if (got.ok() != want.has_value() || (got && !(to_oracle(*got) == *want))) ++mismatches;
      }
    }
  }
  const double secs = since(start);
  return {mismatches == 0 && secs < 60,
          std::to_string(programs) + " length-1 programs x 20 inputs (" + std::to_string(runs) + " runs, " +
              std::to_string(failures) + " faults), " + std::to_string(mismatches) + " mismatches, " + fmt(secs) +
              " s"};
}

// ------------------------------------------------------------------ 2

Verdict dataset_soundness() {
  const auto start = Clock::now();
  DatasetConfig config;
  config.count = 10000;
  config.max_len = 4;
  config.k = 5;
  config.seed = 202;
  const Dataset ds = build_dataset(config);
  long long bad = 0, oracle_bad = 0;
  std::unordered_set<std::uint64_t> sigs;
  for (const DatasetRecord& r : ds.records) {
    for (const Example& ex : r.examples) {
      const auto trace = trace_program(r.program, ex.inputs);
      if (!trace || !(trace->back() == ex.output)) ++bad;
      const auto o = oracle_run(r.program, ex.inputs);
      if (!o || !(*o == to_oracle(ex.output))) ++oracle_bad;
    }
    sigs.insert(semantic_signature(r.program));
  }
  const long long dups = static_cast<long long>(ds.records.size()) - static_cast<long long>(sigs.size());
  const double secs = since(start);
  const bool ok = ds.records.size() == 10000 && bad == 0 && oracle_bad == 0 && dups == 0 && secs < 600;
  return {ok, std::to_string(ds.records.size()) + " records, " + std::to_string(bad) + " failing re-executions (" +
                  std::to_string(oracle_bad) + " by the reference evaluator), " + std::to_string(dups) +
                  " duplicate signatures, " + fmt(secs) + " s"};
}

// ------------------------------------------------------------------ 3

Verdict gradient_check() {
  const auto start = Clock::now();
  double worst = 0;
  std::string where;
  std::size_t checked = 0;
  int kinked = 0;
  for (std::uint64_t seed : {14, 15, 16}) {
    const auto r = testing_support::gradient_check(seed);
    checked += r.checked;
    kinked += r.kinked;
    if (r.worst >= worst) worst = r.worst, where = r.worst_name;
  }
  const double secs = since(start);
  return {worst <= 1e-3 && secs < 60,
          "max relative error " + fmt(worst * 1e6, 3) + "e-6 (" + where + ") over " + std::to_string(checked) +
              " parameters in 3 draws, " + std::to_string(kinked) + " near a SELU kink, " + fmt(secs) + " s"};
}

// ------------------------------------------------------------------ 4

double max_diff(const Prediction& a, const Prediction& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.statement_logprobs.size(); ++i)
    m = std::max(m, std::abs(double(a.statement_logprobs[i]) - b.statement_logprobs[i]));
  for (std::size_t i = 0; i < a.drop_probs.size(); ++i)
    m = std::max(m, std::abs(double(a.drop_probs[i]) - b.drop_probs[i]));
  for (std::size_t i = 0; i < a.function_logprobs.size(); ++i)
    m = std::max(m, std::abs(double(a.function_logprobs[i]) - b.function_logprobs[i]));
  return m;
}

Verdict invariance() {
  ModelShape shape;
  GuideModelParams params(shape);
  Rng rng(404);
  initialize(params, rng);
  const GuideModel model(params);
  DatasetConfig config;
  config.count = 200;
  config.max_len = 4;
  config.seed = 404;
  const Dataset ds = build_dataset(config);
  double worst = 0;
  for (const DatasetRecord& r : ds.records) {
    auto permuted = r.examples;
    rng.shuffle(std::span<Example>(permuted));
    auto doubled = r.examples;
    doubled.insert(doubled.end(), r.examples.begin(), r.examples.end());
    const Prediction base = model.forward(init_environment(r.examples, 8));
    worst = std::max(worst, max_diff(base, model.forward(init_environment(permuted, 8))));
    worst = std::max(worst, max_diff(base, model.forward(init_environment(doubled, 8))));
  }

  // Zero parameters predict uniformly; compare against the closed form.
  const GuideModelParams zero(shape);
  const StatementVocabulary vocab = build_vocabulary(8);
  const auto rows = training_rows(ds.records, vocab);
  double loss_err = 0;
  std::set<int> live_counts;
  for (const TrainingRow& row : rows) {
    int live = 0;
    for (auto m : row.drop_mask) live += m;
    live_counts.insert(live);
    const double analytic = std::log(double(vocab.size())) + std::log(38.0) + live * std::log(2.0);
    const TrainingRow* one[] = {&row};
    loss_err = std::max(loss_err, std::abs(loss_and_gradient<float>(zero, one, {}, nullptr).total() - analytic));
  }
  return {worst <= 1e-6 && loss_err <= 1e-4,
          "permutation/duplication max diff " + fmt(worst * 1e9, 1) + "e-9 over " + std::to_string(ds.records.size()) +
              " problems; uniform loss max error " + fmt(loss_err * 1e6, 2) + "e-6 over " +
              std::to_string(rows.size()) + " rows (" + std::to_string(live_counts.size()) + " live-slot counts)"};
}

// ------------------------------------------------------------------ search experiments

struct RunSummary {
  std::vector<ResultRecord> records;
  int solved = 0;
  int unsound = 0;  // solved programs the reference evaluator rejects
};

bool oracle_accepts(const Program& p, std::span<const Example> examples) {
  for (const Example& ex : examples) {
    const auto o = oracle_run(p, ex.inputs);
    if (!o || !(*o == to_oracle(ex.output))) return false;
  }
  return true;
}

RunSummary summarize(std::vector<ResultRecord> records, std::span<const Problem> problems) {
  RunSummary s;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!records[i].solved) continue;
    ++s.solved;
    if (!records[i].program || !oracle_accepts(*records[i].program, problems[i].examples)) ++s.unsound;
  }
  s.records = std::move(records);
  return s;
}

// Runs (or loads) one search configuration over all problems.
RunSummary run_search(const Context& ctx, const std::string& name, std::span<const Problem> problems,
                      const std::function<SearchResult(std::span<const Example>)>& search) {
  const std::string file = name + ".results.jsonl";
  if (ctx.have(file)) {
    auto records = read_results(ctx.file(file));
    if (records.size() == problems.size()) return summarize(std::move(records), problems);
  }
  const auto start = Clock::now();
  std::vector<ResultRecord> records;
  int solved = 0;
  for (std::size_t i = 0; i < problems.size(); ++i) {
    records.push_back(make_record(search(problems[i].examples)));
    solved += records.back().solved;
    if ((i + 1) % 25 == 0 || i + 1 == problems.size())
      log(name + ": " + std::to_string(solved) + "/" + std::to_string(i + 1) + " solved, " + fmt(since(start), 0) +
          " s");
  }
  write_results(ctx.file(file), records);
  return summarize(std::move(records), problems);
}

// ------------------------------------------------------------------ 5

// Every type-valid program of length <= 2 over one LIST input, run on five
// fixed inputs; distinct output tuples become problems.
std::vector<Problem> enumerable_problems() {
  Rng rng(505);
  std::vector<std::vector<Value>> inputs;
  for (int e = 0; e < 5; ++e) inputs.push_back({to_value(testing_support::random_list(rng))});
  const std::vector<Kind> sig = {Kind::List};
  std::map<std::vector<std::string>, Problem> seen;
  auto consider = [&](const Program& p) {
    std::vector<Example> examples;
    std::vector<std::string> key;
    for (const auto& in : inputs) {
      const auto out = run_program(p, in);
      if (!out) return;
      examples.push_back({in, *out});
      key.push_back(out->to_string());
    }
    seen.try_emplace(key, Problem{examples, p});
  };
  for (const Statement& s1 : valid_statements(sig)) {
    consider(Program{sig, {s1}});
    const std::vector<Kind> two = {Kind::List, s1.fn().result()};
    for (const Statement& s2 : valid_statements(two)) consider(Program{sig, {s1, s2}});
  }
  std::vector<Problem> out;
  for (auto& [k, p] : seen) out.push_back(std::move(p));
  return out;
}

Verdict search_completeness(const Context& ctx) {
  const auto start = Clock::now();
  const auto problems = enumerable_problems();
  const UniformGuide guide(3);
  CabConfig config;
  config.max_length = 2;
  const RunSummary r = run_search(ctx, "enumerable_uniform_cab", problems,
                                  [&](std::span<const Example> ex) { return cab(ex, guide, config); });
  const double secs = since(start);
  return {r.solved == static_cast<int>(problems.size()) && r.unsound == 0 && secs < 600,
          std::to_string(r.solved) + "/" + std::to_string(problems.size()) +
              " distinct length<=2 problems solved by uniform CAB (v=3, no timeout), " + fmt(secs) + " s"};
}

// ------------------------------------------------------------------ 6-8

struct Experiment {
  std::vector<Program> corpus;
  std::vector<Problem> test;
};

Dataset load_or_generate(const Context& ctx, const std::string& name, const DatasetConfig& config) {
  if (ctx.have(name)) return read_dataset(ctx.file(name));
  const auto start = Clock::now();
  const Dataset ds = build_dataset(config);
  write_dataset(ctx.file(name), ds);
  log("generated " + name + " (" + std::to_string(ds.records.size()) + " records, " + fmt(since(start), 0) + " s)");
  return ds;
}

const Experiment& experiment(const Context& ctx) {
  static std::optional<Experiment> cached;
  if (cached) return *cached;
  DatasetConfig tc;
  tc.count = kTrainPrograms;
  tc.max_len = kMaxLen;
  tc.k = kExamples;
  tc.seed = kTrainSeed;
  const Dataset train = load_or_generate(ctx, "train.jsonl", tc);
  const auto sigs = corpus_signatures(train);
  DatasetConfig qc;
  qc.count = kTestProblems;
  qc.min_len = kMaxLen;
  qc.max_len = kMaxLen;
  qc.k = kExamples;
  qc.seed = kTestSeed;
  qc.exclude = &sigs;
  const Dataset test = load_or_generate(ctx, "test.jsonl", qc);
  Experiment e;
  for (const auto& r : train.records) e.corpus.push_back(r.program);
  for (const auto& r : test.records) e.test.push_back({r.examples, r.program});
  cached = std::move(e);
  return *cached;
}

const GuideModel& model(const Context& ctx, bool function_head) {
  static std::map<bool, std::unique_ptr<GuideModel>> models;
  auto& slot = models[function_head];
  if (slot) return *slot;
  const std::string name = function_head ? "model_full.pcck" : "model_no_function_head.pcck";
  if (!ctx.have(name)) {
    experiment(ctx);
    const Dataset corpus = read_dataset(ctx.file("train.jsonl"));
    TrainConfig config;
    config.epochs = kMaxEpochs;
    config.seed = kModelSeed;
    config.heads.function_head = function_head;
    ModelShape shape;
    shape.slots = kSlots;
    std::ofstream history(ctx.file(name + ".log"));
    const TrainResult r = train(corpus, shape, config, [&](const EpochStats& s) {
      const std::string line = "epoch " + std::to_string(s.epoch) + " loss " + fmt(s.train_loss, 4) +
                               " holdout_loss " + fmt(s.holdout_loss, 4) + " holdout_top1 " +
                               fmt(s.holdout_top1, 4) + " (" + fmt(s.seconds, 1) + " s)";
      history << line << std::endl;
      log(name + " " + line);
    });
    save_checkpoint(ctx.file(name), r.params, config.heads);
  }
  slot = std::make_unique<GuideModel>(load_checkpoint(ctx.file(name), kSlots));
  return *slot;
}

CabConfig cab_config(double timeout) {
  CabConfig c;
  c.max_length = kMaxLen;
  c.timeout = timeout;
  return c;
}

RunSummary trained_cab(const Context& ctx) {
  const auto& e = experiment(ctx);
  const GuideModel& m = model(ctx, true);
  return run_search(ctx, "trained_cab_60s", e.test,
                    [&](std::span<const Example> ex) { return cab(ex, m, cab_config(kLongTimeout)); });
}

RunSummary uniform_cab(const Context& ctx) {
  const auto& e = experiment(ctx);
  const UniformGuide g(kSlots);
  return run_search(ctx, "uniform_cab_10s", e.test,
                    [&](std::span<const Example> ex) { return cab(ex, g, cab_config(kShortTimeout)); });
}

RunSummary no_function_head_cab(const Context& ctx) {
  const auto& e = experiment(ctx);
  const GuideModel& m = model(ctx, false);
  return run_search(ctx, "no_function_head_cab_60s", e.test,
                    [&](std::span<const Example> ex) { return cab(ex, m, cab_config(kLongTimeout)); });
}

RunSummary trained_dfs(const Context& ctx) {
  const auto& e = experiment(ctx);
  const GuideModel& m = model(ctx, true);
  DfsConfig c;
  c.max_length = kMaxLen;
  c.timeout = kLongTimeout;
  return run_search(ctx, "trained_dfs_60s", e.test, [&](std::span<const Example> ex) { return dfs(ex, m, c); });
}

int solved_within(const RunSummary& r, double seconds) {
  return static_cast<int>(std::count_if(r.records.begin(), r.records.end(),
                                        [&](const ResultRecord& x) { return x.solved && x.time_s <= seconds; }));
}

std::string percent(int solved, std::size_t total) {
  return std::to_string(solved) + "/" + std::to_string(total) + " (" + fmt(100.0 * solved / total, 0) + "%)";
}

Verdict scaled_synthesis(const Context& ctx) {
  const auto& e = experiment(ctx);
  const RunSummary r = trained_cab(ctx);
  const double rate = static_cast<double>(r.solved) / e.test.size();
  const auto times = time_to_ratio(r.records, std::vector<double>{50, 70});
  std::string t70 = times[1] ? fmt(*times[1], 2) + " s" : "never";
  return {rate >= 0.70, "trained CAB solved " + percent(r.solved, e.test.size()) + " of length-" +
                            std::to_string(kMaxLen) + " problems within " + fmt(kLongTimeout, 0) + " s (" +
                            std::to_string(e.corpus.size()) + " training programs, v=" + std::to_string(kSlots) +
                            "); 70% reached at " + t70};
}

Verdict guidance_effect(const Context& ctx) {
  const auto& e = experiment(ctx);
  // CAB is deterministic, so a 60 s run's solve times give the 10 s outcome.
  const int trained = solved_within(trained_cab(ctx), kShortTimeout);
  const RunSummary u = uniform_cab(ctx);
  const int uniform = solved_within(u, kShortTimeout);
  return {trained >= 3 * uniform, "at " + fmt(kShortTimeout, 0) + " s: trained CAB " + percent(trained, e.test.size()) +
                                      ", uniform CAB " + percent(uniform, e.test.size()) + ", ratio " +
                                      (uniform == 0 ? std::string("inf") : fmt(double(trained) / uniform, 2))};
}

Verdict ablation_direction(const Context& ctx) {
  const auto& e = experiment(ctx);
  const int full = trained_cab(ctx).solved;
  const int sd = no_function_head_cab(ctx).solved;
  const int d = trained_dfs(ctx).solved;
  return {full >= sd && full >= d, "at " + fmt(kLongTimeout, 0) + " s: full CAB " + percent(full, e.test.size()) +
                                       ", no-function-head CAB " + percent(sd, e.test.size()) + ", DFS width 50 " +
                                       percent(d, e.test.size())};
}

// ------------------------------------------------------------------ 9, 10

Verdict soundness(const Context& ctx) {
  int solved = 0, unsound = 0;
  std::vector<std::string> parts;
  auto add = [&](const std::string& name, const RunSummary& r) {
    solved += r.solved;
    unsound += r.unsound;
    parts.push_back(name + " " + std::to_string(r.solved));
  };
  const auto enumerable = enumerable_problems();
  const UniformGuide g3(3);
  CabConfig small;
  small.max_length = 2;
  add("enumerable", run_search(ctx, "enumerable_uniform_cab", enumerable,
                               [&](std::span<const Example> ex) { return cab(ex, g3, small); }));
  add("trained", trained_cab(ctx));
  add("uniform", uniform_cab(ctx));
  add("no-function-head", no_function_head_cab(ctx));
  add("dfs", trained_dfs(ctx));
  std::string list;
  for (const auto& p : parts) list += (list.empty() ? "" : ", ") + p;
  return {unsound == 0, std::to_string(solved - unsound) + "/" + std::to_string(solved) +
                            " solved results re-validated by the reference evaluator (" + list + ")"};
}

Verdict report_integrity(const Context& ctx) {
  const auto& e = experiment(ctx);
  const CorpusStats stats = corpus_stats(e.corpus);
  bool ok = true;
  int reports = 0;
  double worst_row = 0;
  for (const RunSummary& r : {trained_cab(ctx), uniform_cab(ctx), no_function_head_cab(ctx), trained_dfs(ctx)}) {
    const EvalReport rep = build_report(r.records, e.test, stats);
    ++reports;
    double prev = -1;
    for (const auto& point : rep.json["curve"]) {
      const double pct = point["percent"].get<double>();
      if (pct < prev) ok = false;
      prev = pct;
    }
    for (const auto& row : rep.json["length_matrix"]) {
      double sum = 0;
      for (const auto& [col, pct] : row["percent"].items()) sum += pct.get<double>();
      worst_row = std::max(worst_row, std::abs(sum - 100));
    }
    if (rep.soundness_failures != 0) ok = false;
  }
  double worst_self = 0;
  for (const Problem& p : e.test) worst_self = std::max(worst_self, std::abs(cider_score(*p.truth, *p.truth, stats) - 10));
  for (std::size_t i = 0; i < e.corpus.size(); i += 97)
    worst_self = std::max(worst_self, std::abs(cider_score(e.corpus[i], e.corpus[i], stats) - 10));
  ok = ok && worst_row <= 0.1 && worst_self <= 1e-9;
  return {ok, std::to_string(reports) + " reports: curves monotone, length-matrix rows within " + fmt(worst_row, 6) +
                  " of 100, max |cider(x,x) - 10| = " + fmt(worst_self, 12)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  std::vector<int> only;
  std::string cache = "acceptance_cache";
  bool fresh = false;
  app.add_option("--criterion", only, "Run only these criteria (1-10)")->check(CLI::Range(1, 10));
  app.add_option("--cache", cache, "Directory for cached corpora, checkpoints and results");
  app.add_flag("--fresh", fresh, "Ignore cached artifacts");
  CLI11_PARSE(app, argc, argv);

  Context ctx{cache, fresh};
  fs::create_directories(ctx.cache);

  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"interpreter oracle", interpreter_oracle},
      {"dataset soundness", dataset_soundness},
      {"gradient check", gradient_check},
      {"invariance suite", invariance},
      {"search completeness", [&] { return search_completeness(ctx); }},
      {"scaled synthesis", [&] { return scaled_synthesis(ctx); }},
      {"guidance effect", [&] { return guidance_effect(ctx); }},
      {"ablation direction", [&] { return ablation_direction(ctx); }},
      {"soundness gate", [&] { return soundness(ctx); }},
      {"report integrity", [&] { return report_integrity(ctx); }},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int n = static_cast<int>(i) + 1;
    if (!only.empty() && std::find(only.begin(), only.end(), n) == only.end()) continue;
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    failed += !v.pass;
    std::cout << "criterion " << n << " " << (v.pass ? "PASS" : "FAIL") << " " << criteria[i].first << ": "
              << v.summary << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
