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

#include <Eigen/Core>
#include <span>
#include <vector>

#include "pcc/environment.hpp"

namespace pcc {

// Per-environment predictions, one column per environment.
struct PredictionBatch {
  Eigen::MatrixXf statement_logprobs;  // |S| x B
  Eigen::MatrixXf drop_probs;          // v x B
  Eigen::MatrixXf function_logprobs;   // 38 x B
};

struct Prediction {
  std::vector<float> statement_logprobs;
  std::vector<float> drop_probs;
  std::vector<float> function_logprobs;
};

Prediction column(const PredictionBatch& batch, int b);

// Anything that scores next statements and droppable slots for a batch of
// environments. Implementations are immutable and safe to share.
class Guide {
 public:
  virtual ~Guide() = default;

  virtual int slots() const = 0;
  virtual int vocabulary_size() const = 0;
  virtual void predict(std::span<const Environment* const> envs, PredictionBatch& out) const = 0;
};

// Uniform prior: every statement -ln|S|, every drop 0.5, every function -ln 38.
class UniformGuide final : public Guide {
 public:
  explicit UniformGuide(int slots);

  int slots() const override { return slots_; }
  int vocabulary_size() const override { return size_; }
  void predict(std::span<const Environment* const> envs, PredictionBatch& out) const override;

 private:
  int slots_;
  int size_;
};

}  // namespace pcc
