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

#include <functional>
#include <span>
#include <vector>

#include "pcc/datagen.hpp"
#include "pcc/model.hpp"

namespace pcc {

struct TrainConfig {
  double learning_rate = 1e-3;
  int batch_size = 100;
  int epochs = 30;
  std::uint64_t seed = 0;
  HeadFlags heads;
  // Fraction of records held out for early stopping; 0 trains on everything
  // and runs all epochs.
  double holdout = 0.1;
  int patience = 3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct EpochStats {
  int epoch = 0;  // 0 is the untrained model
  double train_loss = 0;
  double holdout_loss = 0;
  double holdout_top1 = 0;
  double seconds = 0;
};

struct TrainResult {
  GuideModelParams params;
  std::vector<EpochStats> history;
  int best_epoch = 0;
};

using EpochCallback = std::function<void(const EpochStats&)>;

// Adam on the mean loss. Rows are shuffled every epoch from the seed; the
// parameters with the best held-out statement top-1 accuracy are returned.
TrainResult train(std::span<const TrainingRow> rows, std::span<const TrainingRow> holdout, const ModelShape& shape,
                  const TrainConfig& config, const EpochCallback& on_epoch = {});

// Splits by record (a program's rows stay together) before training.
// Errc::InvalidArgument if a record needs more than shape.slots live values.
TrainResult train(const Dataset& dataset, const ModelShape& shape, const TrainConfig& config,
                  const EpochCallback& on_epoch = {});

std::vector<TrainingRow> training_rows(std::span<const DatasetRecord> records, const StatementVocabulary& vocab);

// Mean loss over rows (no gradient).
double mean_loss(const GuideModelParams& params, std::span<const TrainingRow> rows, HeadFlags heads);

// Fraction of rows whose most likely statement is the labelled one.
double statement_top1(const GuideModel& model, std::span<const TrainingRow> rows);

}  // namespace pcc
