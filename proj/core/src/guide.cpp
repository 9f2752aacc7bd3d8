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

#include "pcc/guide.hpp"

#include <cmath>

#include "pcc/vocabulary.hpp"

namespace pcc {

Prediction column(const PredictionBatch& batch, int b) {
  auto copy = [b](const Eigen::MatrixXf& m) {
    std::vector<float> out(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) out[static_cast<std::size_t>(i)] = m(i, b);
    return out;
  };
  return {copy(batch.statement_logprobs), copy(batch.drop_probs), copy(batch.function_logprobs)};
}

UniformGuide::UniformGuide(int slots) : slots_(slots), size_(build_vocabulary(slots).size()) {}

void UniformGuide::predict(std::span<const Environment* const> envs, PredictionBatch& out) const {
  const auto b = static_cast<Eigen::Index>(envs.size());
  out.statement_logprobs.setConstant(size_, b, -std::log(static_cast<float>(size_)));
  out.drop_probs.setConstant(slots_, b, 0.5f);
  out.function_logprobs.setConstant(kNumFunctions, b, -std::log(static_cast<float>(kNumFunctions)));
}

}  // namespace pcc
