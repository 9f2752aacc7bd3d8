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

// pcc: dataset generation, training, synthesis and evaluation.

#include <CLI11.hpp>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <mutex>
#include <thread>

#include "pcc/checkpoint.hpp"
#include "pcc/dataset_io.hpp"
#include "pcc/report.hpp"
#include "pcc/search.hpp"
#include "pcc/trainer.hpp"

namespace {

struct GenArgs {
  int count = 100;
  int max_len = 4;
  int min_len = 1;
  int k = 5;
  std::uint64_t seed = 0;
  std::string out;
  std::string exclude;
};

struct TrainArgs {
  std::string dataset;
  int v = 8;
  int epochs = 30;
  double lr = 1e-3;
  int batch = 100;
  std::uint64_t seed = 0;
  bool no_function_head = false;
  bool no_drop_head = false;
  double holdout = 0.1;
  int patience = 3;
  bool quiet = false;
  std::string out;
};

struct SynthArgs {
  std::string model;
  int v = 8;
  std::string problems;
  double timeout = 10;
  int max_len = 4;
  std::string search = "cab";
  int dfs_width = 50;
  bool random_drop = false;
  std::uint64_t seed = 0;
  std::string out;
};

struct EvalArgs {
  std::string results;
  std::string truth;
  std::string corpus;
  std::string report;
  bool no_times = false;
};

int worker_count(std::size_t jobs) {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("PCC_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) n = std::min(n, static_cast<unsigned>(cap));
  }
  return static_cast<int>(std::max<std::size_t>(1, std::min<std::size_t>(n, jobs)));
}

int run_gen(const GenArgs& a) {
  pcc::DatasetConfig config;
  config.count = a.count;
  config.max_len = a.max_len;
  config.min_len = a.min_len;
  config.k = a.k;
  config.seed = a.seed;
  std::unordered_set<std::uint64_t> excluded;
  if (!a.exclude.empty()) {
    excluded = pcc::corpus_signatures(pcc::read_dataset(std::filesystem::path(a.exclude)));
    config.exclude = &excluded;
  }
  const pcc::Dataset data = pcc::build_dataset(config);
  pcc::write_dataset(std::filesystem::path(a.out), data);
  std::cerr << "wrote " << data.records.size() << " records to " << a.out << "\n";
  return 0;
}

int run_train(const TrainArgs& a) {
  const pcc::Dataset data = pcc::read_dataset(std::filesystem::path(a.dataset));
  if (data.records.empty()) throw pcc::Error(pcc::Errc::InvalidArgument, a.dataset + " has no records");
  pcc::ModelShape shape;
  shape.slots = a.v;
  pcc::TrainConfig config;
  config.learning_rate = a.lr;
  config.batch_size = a.batch;
  config.epochs = a.epochs;
  config.seed = a.seed;
  config.heads.function_head = !a.no_function_head;
  config.heads.drop_head = !a.no_drop_head;
  config.holdout = a.holdout;
  config.patience = a.patience;
  auto log = [&](const pcc::EpochStats& s) {
    if (a.quiet) return;
    std::cerr << "epoch " << s.epoch << " loss " << s.train_loss << " holdout_loss " << s.holdout_loss
              << " holdout_top1 " << s.holdout_top1 << " (" << s.seconds << "s)\n";
  };
  const pcc::TrainResult result = pcc::train(data, shape, config, log);
  pcc::save_checkpoint(std::filesystem::path(a.out), result.params, config.heads);
  if (!a.quiet) std::cerr << "best epoch " << result.best_epoch << ", wrote " << a.out << "\n";
  return 0;
}

int run_synth(const SynthArgs& a) {
  std::unique_ptr<pcc::Guide> guide;
  if (a.model == "uniform")
    guide = std::make_unique<pcc::UniformGuide>(a.v);
  else
    guide = std::make_unique<pcc::GuideModel>(pcc::load_checkpoint(std::filesystem::path(a.model)));
  const auto problems = pcc::read_problems(a.problems);
  if (problems.empty()) throw pcc::Error(pcc::Errc::InvalidArgument, a.problems + " has no problems");

  std::vector<pcc::ResultRecord> records(problems.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < problems.size(); i = next++) {
      try {
        const auto& ex = problems[i].examples;
        pcc::SearchResult r;
        if (a.search == "cab") {
          pcc::CabConfig config;
          config.max_length = a.max_len;
          config.timeout = a.timeout;
          config.gc = {a.random_drop, pcc::derive_seed(a.seed, i)};
          r = pcc::cab(ex, *guide, config);
        } else {
          pcc::DfsConfig config;
          config.width = a.dfs_width;
          config.max_length = a.max_len;
          config.timeout = a.timeout;
          config.gc = {a.random_drop, pcc::derive_seed(a.seed, i)};
          r = pcc::dfs(ex, *guide, config);
        }
        records[i] = pcc::make_record(r);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = problems.size();
      }
    }
  };
  const int workers = worker_count(problems.size());
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  pcc::write_results(std::filesystem::path(a.out), records);
  const auto solved = std::count_if(records.begin(), records.end(), [](const auto& r) { return r.solved; });
  std::cerr << "solved " << solved << "/" << records.size() << "\n";
  return 0;
}

int run_eval(const EvalArgs& a) {
  const auto results = pcc::read_results(a.results);
  const auto problems = pcc::read_problems(a.truth);
  if (problems.empty()) throw pcc::Error(pcc::Errc::InvalidArgument, a.truth + " has no problems");
  const pcc::Dataset corpus = pcc::read_dataset(std::filesystem::path(a.corpus));
  std::vector<pcc::Program> programs;
  for (const auto& r : corpus.records) programs.push_back(r.program);
  pcc::ReportOptions options;
  options.zero_times = a.no_times;
  const pcc::EvalReport report = pcc::build_report(results, problems, pcc::corpus_stats(programs), options);
  std::ofstream out(a.report, std::ios::binary);
  if (!out) throw pcc::Error(pcc::Errc::Io, "cannot write " + a.report);
  out << report.json.dump(2) << '\n';
  std::cout << pcc::format_report(report.json);
  if (report.soundness_failures > 0) {
    std::cerr << "pcc: " << report.soundness_failures << " solved programs fail re-execution\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Programming-by-example synthesis toolkit"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a training or test corpus");
  gen_cmd->add_option("--count", gen.count, "Number of programs")->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--max-len", gen.max_len, "Maximum program length")->required()->check(CLI::Range(1, 20));
  gen_cmd->add_option("--min-len", gen.min_len, "Minimum program length")->check(CLI::Range(1, 20));
  gen_cmd->add_option("--k", gen.k, "Examples per program")->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--seed", gen.seed, "Random seed")->required();
  gen_cmd->add_option("--out", gen.out, "Output JSON-lines file")->required();
  gen_cmd->add_option("--exclude", gen.exclude, "Corpus whose semantic signatures must not repeat")
      ->check(CLI::ExistingFile);

  TrainArgs tr;
  auto* train_cmd = app.add_subcommand("train", "Train the guide model");
  train_cmd->add_option("--dataset", tr.dataset, "Corpus file")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--v", tr.v, "Variable slots")->required()->check(CLI::Range(1, 20));
  train_cmd->add_option("--epochs", tr.epochs, "Maximum epochs")->required()->check(CLI::NonNegativeNumber);
  train_cmd->add_option("--lr", tr.lr, "Learning rate")->check(CLI::PositiveNumber);
  train_cmd->add_option("--batch", tr.batch, "Batch size")->check(CLI::PositiveNumber);
  train_cmd->add_option("--seed", tr.seed, "Random seed");
  train_cmd->add_flag("--no-function-head", tr.no_function_head, "Drop the function loss");
  train_cmd->add_flag("--no-drop-head", tr.no_drop_head, "Drop the variable-drop loss");
  train_cmd->add_option("--holdout", tr.holdout, "Held-out fraction for early stopping")->check(CLI::Range(0.0, 0.9));
  train_cmd->add_option("--patience", tr.patience, "Epochs without improvement before stopping");
  train_cmd->add_flag("--quiet", tr.quiet, "No per-epoch log");
  train_cmd->add_option("--out", tr.out, "Checkpoint path")->required();

  SynthArgs sy;
  auto* synth_cmd = app.add_subcommand("synth", "Search for programs matching each problem");
  synth_cmd->add_option("--model", sy.model, "Checkpoint, or 'uniform' for the uniform prior")->required();
  synth_cmd->add_option("--v", sy.v, "Slots for the uniform prior")->check(CLI::Range(1, 20));
  synth_cmd->add_option("--problems", sy.problems, "Problem file")->required()->check(CLI::ExistingFile);
  synth_cmd->add_option("--timeout", sy.timeout, "Seconds per problem")->required()->check(CLI::PositiveNumber);
  synth_cmd->add_option("--max-len", sy.max_len, "Maximum program length")->required()->check(CLI::Range(1, 20));
  synth_cmd->add_option("--search", sy.search, "Search strategy")->check(CLI::IsMember({"cab", "dfs"}));
  synth_cmd->add_option("--dfs-width", sy.dfs_width, "Statements tried per DFS node")->check(CLI::PositiveNumber);
  synth_cmd->add_flag("--random-drop", sy.random_drop, "Garbage-collect a random slot");
  synth_cmd->add_option("--seed", sy.seed, "Seed for random drops");
  synth_cmd->add_option("--out", sy.out, "Result records file")->required();

  EvalArgs ev;
  auto* eval_cmd = app.add_subcommand("eval", "Summarise synthesis results");
  eval_cmd->add_option("--results", ev.results, "Result records")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--truth", ev.truth, "Problems with ground-truth programs")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--corpus", ev.corpus, "Reference corpus for CIDEr")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--report", ev.report, "Report JSON path")->required();
  eval_cmd->add_flag("--no-times", ev.no_times, "Zero all wall times");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*gen_cmd) return run_gen(gen);
    if (*train_cmd) return run_train(tr);
    if (*synth_cmd) return run_synth(sy);
    if (*eval_cmd) return run_eval(ev);
  } catch (const pcc::Error& e) {
    std::cerr << "pcc: " << e.what() << "\n";
    return 1;
  } catch (const std::logic_error& e) {
    std::cerr << "pcc: internal error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "pcc: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
