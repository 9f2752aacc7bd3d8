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

#include "pcc/trainer.hpp"

#include <chrono>
#include <cmath>
#include <numeric>

namespace pcc {

namespace {

constexpr std::size_t kEvalBatch = 256;

class Adam {
 public:
  Adam(std::size_t n, const TrainConfig& config) : m_(n, 0.0f), v_(n, 0.0f), config_(config) {}

  void step(std::span<float> params, std::span<const float> grad) {
    ++t_;
    const double c1 = 1.0 - std::pow(config_.beta1, t_);
    const double c2 = 1.0 - std::pow(config_.beta2, t_);
    const auto b1 = static_cast<float>(config_.beta1);
    const auto b2 = static_cast<float>(config_.beta2);
    const auto lr = static_cast<float>(config_.learning_rate * std::sqrt(c2) / c1);
    const auto eps = static_cast<float>(config_.epsilon * std::sqrt(c2));
    for (std::size_t i = 0; i < params.size(); ++i) {
      const float g = grad[i];
      m_[i] = b1 * m_[i] + (1.0f - b1) * g;
      v_[i] = b2 * v_[i] + (1.0f - b2) * g * g;
      params[i] -= lr * m_[i] / (std::sqrt(v_[i]) + eps);
    }
  }

 private:
  std::vector<float> m_;
  std::vector<float> v_;
  const TrainConfig& config_;
  int t_ = 0;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

std::vector<TrainingRow> training_rows(std::span<const DatasetRecord> records, const StatementVocabulary& vocab) {
  std::vector<TrainingRow> rows;
  for (const DatasetRecord& r : records) {
    auto made = make_training_rows(r, vocab);
    if (!made)
      throw Error(Errc::InvalidArgument, "record " + format_program(r.program) + " does not fit in " +
                                             std::to_string(vocab.slots()) + " slots");
    for (TrainingRow& row : *made) rows.push_back(std::move(row));
  }
  return rows;
}

double mean_loss(const GuideModelParams& params, std::span<const TrainingRow> rows, HeadFlags heads) {
  if (rows.empty()) return 0;
  double total = 0;
  std::vector<const TrainingRow*> batch;
  for (std::size_t begin = 0; begin < rows.size(); begin += kEvalBatch) {
    const std::size_t end = std::min(rows.size(), begin + kEvalBatch);
    batch.clear();
    for (std::size_t i = begin; i < end; ++i) batch.push_back(&rows[i]);
    total += loss_and_gradient<float>(params, batch, heads, nullptr).total() * static_cast<double>(end - begin);
  }
  return total / static_cast<double>(rows.size());
}

double statement_top1(const GuideModel& model, std::span<const TrainingRow> rows) {
  if (rows.empty()) return 0;
  std::size_t hits = 0;
  std::vector<const Environment*> envs;
  PredictionBatch pred;
  for (std::size_t begin = 0; begin < rows.size(); begin += kEvalBatch) {
    const std::size_t end = std::min(rows.size(), begin + kEvalBatch);
    envs.clear();
    for (std::size_t i = begin; i < end; ++i) envs.push_back(&rows[i].env);
    model.predict(envs, pred);
    for (std::size_t i = begin; i < end; ++i) {
      Eigen::Index best = 0;
      pred.statement_logprobs.col(static_cast<Eigen::Index>(i - begin)).maxCoeff(&best);
      if (best == rows[i].next_statement) ++hits;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(rows.size());
}

TrainResult train(std::span<const TrainingRow> rows, std::span<const TrainingRow> holdout, const ModelShape& shape,
                  const TrainConfig& config, const EpochCallback& on_epoch) {
  if (config.learning_rate <= 0 || config.batch_size <= 0 || config.epochs < 0)
    throw Error(Errc::InvalidArgument, "learning rate, batch size and epochs must be positive");
  if (rows.empty()) throw Error(Errc::InvalidArgument, "no training rows");

  TrainResult result;
  GuideModelParams params(shape);
  Rng init_rng(derive_seed(config.seed, 0));
  initialize(params, init_rng);

  auto evaluate = [&](int epoch, double train_loss, std::chrono::steady_clock::time_point start) {
    EpochStats stats;
    stats.epoch = epoch;
    stats.train_loss = train_loss;
    if (!holdout.empty()) {
      stats.holdout_loss = mean_loss(params, holdout, config.heads);
      stats.holdout_top1 = statement_top1(GuideModel(params), holdout);
    }
    stats.seconds = seconds_since(start);
    result.history.push_back(stats);
    if (on_epoch) on_epoch(stats);
    return stats;
  };

  auto start = std::chrono::steady_clock::now();
  double best = evaluate(0, mean_loss(params, rows, config.heads), start).holdout_top1;
  result.params = params;
  int stale = 0;

  Adam adam(params.size(), config);
  GuideModelParams grad(shape);
  std::vector<std::size_t> order(rows.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<const TrainingRow*> batch;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    start = std::chrono::steady_clock::now();
    Rng shuffle_rng(derive_seed(config.seed, 1000 + static_cast<std::uint64_t>(epoch)));
    shuffle_rng.shuffle(std::span<std::size_t>(order));
    double epoch_loss = 0;
    for (std::size_t begin = 0; begin < order.size(); begin += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t end = std::min(order.size(), begin + static_cast<std::size_t>(config.batch_size));
      batch.clear();
      for (std::size_t i = begin; i < end; ++i) batch.push_back(&rows[order[i]]);
      const LossParts parts = loss_and_gradient<float>(params, batch, config.heads, &grad);
      if (!std::isfinite(parts.total()) || !grad.all_finite())
        throw Error(Errc::InvalidArgument, "non-finite loss or gradient at epoch " + std::to_string(epoch));
      epoch_loss += parts.total() * static_cast<double>(end - begin);
      adam.step(params.data(), grad.data());
    }
    const EpochStats stats = evaluate(epoch, epoch_loss / static_cast<double>(rows.size()), start);

    if (holdout.empty()) {
      result.params = params;
      result.best_epoch = epoch;
      continue;
    }
    if (stats.holdout_top1 > best) {
      best = stats.holdout_top1;
      result.params = params;
      result.best_epoch = epoch;
      stale = 0;
    } else if (config.patience > 0 && ++stale >= config.patience) {
      break;
    }
  }
  return result;
}

TrainResult train(const Dataset& dataset, const ModelShape& shape, const TrainConfig& config,
                  const EpochCallback& on_epoch) {
  if (config.holdout < 0 || config.holdout >= 1) throw Error(Errc::InvalidArgument, "holdout must be in [0, 1)");
  const StatementVocabulary vocab = build_vocabulary(shape.slots);
  const std::size_t n = dataset.records.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng split_rng(derive_seed(config.seed, 1));
  split_rng.shuffle(std::span<std::size_t>(order));
  const auto held = static_cast<std::size_t>(std::ceil(config.holdout * static_cast<double>(n)));

  std::vector<DatasetRecord> train_records;
  std::vector<DatasetRecord> holdout_records;
  for (std::size_t i = 0; i < n; ++i)
    (i < held ? holdout_records : train_records).push_back(dataset.records[order[i]]);
  const auto rows = training_rows(train_records, vocab);
  const auto held_rows = training_rows(holdout_records, vocab);
  return train(rows, held_rows, shape, config, on_epoch);
}

}  // namespace pcc
