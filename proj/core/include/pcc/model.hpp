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
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pcc/datagen.hpp"
#include "pcc/guide.hpp"
#include "pcc/random.hpp"
#include "pcc/vocabulary.hpp"

namespace pcc {

// Embedding table rows cover [-256, 256]; row 512 encodes NULL and missing
// list elements.
inline constexpr int kTableRows = 513;
inline constexpr int kNullRow = 512;

inline constexpr double kSeluLambda = 1.0507009873554805;
inline constexpr double kSeluAlpha = 1.6732632423543772;

struct ModelShape {
  int slots = 8;
  int embed_dim = 20;
  int var_units = 56;
  int block_layers = 10;
  int block_units = 56;
  int block_out = 256;

  int variable_width() const { return 2 + kMaxListLength * embed_dim; }
  int state_width() const { return var_units * (slots + 1); }
  int layer_inputs(int layer) const { return state_width() + block_units * layer; }
  int layer_outputs(int layer) const { return layer + 1 == block_layers ? block_out : block_units; }
  int statements() const { return build_vocabulary(slots).size(); }

  friend bool operator==(const ModelShape&, const ModelShape&) = default;
};

struct TensorSpec {
  std::string name;
  int rows = 0;
  int cols = 0;
  std::size_t offset = 0;

  std::size_t size() const { return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols); }
};

// Tensor order: embedding table, variable projection (weight, bias), block
// layers (weight, bias each), statement head, drop head, function head.
std::vector<TensorSpec> tensor_layout(const ModelShape& shape);

// All learned tensors in one contiguous buffer; tensors are column-major
// views into it.
template <class S>
class ParamsT {
 public:
  using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
  using Map = Eigen::Map<Mat>;
  using ConstMap = Eigen::Map<const Mat>;

  ParamsT() = default;
  explicit ParamsT(const ModelShape& shape);

  const ModelShape& shape() const { return shape_; }
  const std::vector<TensorSpec>& layout() const { return layout_; }
  std::span<S> data() { return values_; }
  std::span<const S> data() const { return values_; }
  std::size_t size() const { return values_.size(); }

  Map tensor(int id);
  ConstMap tensor(int id) const;

  int table_id() const { return 0; }
  int var_weight_id() const { return 1; }
  int var_bias_id() const { return 2; }
  int block_weight_id(int layer) const { return 3 + 2 * layer; }
  int block_bias_id(int layer) const { return 4 + 2 * layer; }
  int statement_weight_id() const { return 3 + 2 * shape_.block_layers; }
  int statement_bias_id() const { return statement_weight_id() + 1; }
  int drop_weight_id() const { return statement_weight_id() + 2; }
  int drop_bias_id() const { return statement_weight_id() + 3; }
  int function_weight_id() const { return statement_weight_id() + 4; }
  int function_bias_id() const { return statement_weight_id() + 5; }

  void set_zero();
  bool all_finite() const;

  template <class T>
  ParamsT<T> cast() const;

 private:
  ModelShape shape_;
  std::vector<TensorSpec> layout_;
  // Aligned so that vectorized kernels see the same layout on every run.
  std::vector<S, Eigen::aligned_allocator<S>> values_;
};

using GuideModelParams = ParamsT<float>;

// Affine weights uniform in +-fan_in^-1/2, biases zero, table uniform in +-0.1.
template <class S>
void initialize(ParamsT<S>& params, Rng& rng);

struct HeadFlags {
  bool function_head = true;
  bool drop_head = true;

  friend bool operator==(const HeadFlags&, const HeadFlags&) = default;
};

// Fixed-length encoding of one variable: two type bits then 20 embedded
// elements. INT k -> [1,0], element 0 = k; LIST -> [0,1]; NULL -> [0,0].
template <class S>
Eigen::Matrix<S, Eigen::Dynamic, 1> embed_variable(const Value* slot, const ParamsT<S>& params);

// Projected, SELU-activated slot vectors concatenated in slot order with the
// output last: length var_units * (v + 1).
template <class S>
Eigen::Matrix<S, Eigen::Dynamic, 1> embed_state(const Environment& env, int example, const ParamsT<S>& params);

// Forward pass for a batch of environments. Errc::DimensionMismatch when an
// environment's slot count differs from the model's.
template <class S>
void forward_batch(const ParamsT<S>& params, std::span<const Environment* const> envs, PredictionBatch& out);

Prediction forward(const Environment& env, const GuideModelParams& params);

// Per-head mean losses over a batch.
struct LossParts {
  double statement = 0;
  double function = 0;
  double drop = 0;

  double total() const { return statement + function + drop; }
};

// Unweighted sum of statement CE, function CE and masked per-slot BCE,
// averaged over rows; disabled heads contribute zero. Writes the gradient of
// the mean loss into `grad` when non-null.
template <class S>
LossParts loss_and_gradient(const ParamsT<S>& params, std::span<const TrainingRow* const> rows, HeadFlags heads,
                            ParamsT<S>* grad);

// Loss of a single precomputed prediction against a row's labels.
double loss(const Prediction& pred, const TrainingRow& row, HeadFlags heads);

// Inference wrapper with the embedding projection cached.
class GuideModel final : public Guide {
 public:
  explicit GuideModel(GuideModelParams params);

  const GuideModelParams& params() const { return params_; }
  const ModelShape& shape() const { return params_.shape(); }

  int slots() const override { return params_.shape().slots; }
  int vocabulary_size() const override { return vocab_size_; }
  void predict(std::span<const Environment* const> envs, PredictionBatch& out) const override;

  Prediction forward(const Environment& env) const;

 private:
  GuideModelParams params_;
  Eigen::MatrixXf projection_;
  int vocab_size_;
};

}  // namespace pcc
