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

#include <benchmark/benchmark.h>

#include "pcc/datagen.hpp"
#include "pcc/model.hpp"
#include "pcc/search.hpp"

namespace {

std::vector<pcc::DatasetRecord> corpus(int count, int max_len) {
  pcc::DatasetConfig config;
  config.count = count;
  config.max_len = max_len;
  config.seed = 42;
  return pcc::build_dataset(config).records;
}

pcc::GuideModelParams model(int slots) {
  pcc::ModelShape shape;
  shape.slots = slots;
  pcc::GuideModelParams p(shape);
  pcc::Rng rng(1);
  pcc::initialize(p, rng);
  return p;
}

void BM_RunProgram(benchmark::State& state) {
  const auto records = corpus(200, 4);
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& r = records[i++ % records.size()];
    for (const auto& ex : r.examples) benchmark::DoNotOptimize(pcc::run_program(r.program, ex.inputs));
  }
  state.SetItemsProcessed(state.iterations() * 5);
}
BENCHMARK(BM_RunProgram);

void BM_BuildVocabulary(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(pcc::build_vocabulary(static_cast<int>(state.range(0))));
}
BENCHMARK(BM_BuildVocabulary)->Arg(6)->Arg(8);

void BM_EnvironmentStep(benchmark::State& state) {
  const auto records = corpus(30, 1);
  const pcc::StatementVocabulary vocab = pcc::build_vocabulary(8);
  const pcc::Environment env = pcc::init_environment(records[0].examples, 8);
  int idx = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(env.step(vocab.entry_at(idx)));
    idx = (idx + 1) % vocab.size();
  }
}
BENCHMARK(BM_EnvironmentStep);

void BM_DatasetGeneration(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(corpus(100, 4));
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_DatasetGeneration)->Unit(benchmark::kMillisecond);

void BM_ForwardBatch(benchmark::State& state) {
  const pcc::GuideModel m(model(8));
  const auto records = corpus(static_cast<int>(state.range(0)), 3);
  std::vector<pcc::Environment> envs;
  for (const auto& r : records) envs.push_back(pcc::init_environment(r.examples, 8));
  std::vector<const pcc::Environment*> ptrs;
  for (const auto& e : envs) ptrs.push_back(&e);
  pcc::PredictionBatch out;
  for (auto _ : state) m.predict(ptrs, out);
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(ptrs.size()));
}
BENCHMARK(BM_ForwardBatch)->Arg(1)->Arg(32)->Arg(100)->Unit(benchmark::kMicrosecond);

void BM_TrainingStep(benchmark::State& state) {
  const auto params = model(8);
  const pcc::StatementVocabulary vocab = pcc::build_vocabulary(8);
  std::vector<pcc::TrainingRow> rows;
  for (const auto& r : corpus(60, 3)) {
    auto made = pcc::make_training_rows(r, vocab);
    if (made)
      for (auto& row : *made) rows.push_back(std::move(row));
  }
  rows.resize(std::min<std::size_t>(rows.size(), 100));
  std::vector<const pcc::TrainingRow*> batch;
  for (const auto& r : rows) batch.push_back(&r);
  pcc::GuideModelParams grad(params.shape());
  for (auto _ : state) benchmark::DoNotOptimize(pcc::loss_and_gradient<float>(params, batch, {}, &grad));
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(batch.size()));
}
BENCHMARK(BM_TrainingStep)->Unit(benchmark::kMillisecond);

void BM_BeamLevel(benchmark::State& state) {
  const pcc::GuideModel m(model(6));
  const auto records = corpus(20, 4);
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& r = records[i++ % records.size()];
    benchmark::DoNotOptimize(pcc::beam_search(r.examples, m, 100, 10, 3, pcc::Deadline::never()));
  }
}
BENCHMARK(BM_BeamLevel)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
