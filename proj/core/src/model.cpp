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

#include "pcc/model.hpp"

#include <cmath>

namespace pcc {

namespace {

template <class S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;

struct SlotCode {
  std::uint8_t type = 0;  // 0 NULL, 1 INT, 2 LIST
  std::array<std::uint16_t, kMaxListLength> rows{};
};

SlotCode encode(const Value* v) {
  SlotCode code;
  code.rows.fill(kNullRow);
  if (v == nullptr) return code;
  if (v->is_int()) {
    code.type = 1;
    code.rows[0] = static_cast<std::uint16_t>(v->as_int() + 256);
  } else {
    code.type = 2;
    for (int i = 0; i < v->size(); ++i) code.rows[static_cast<std::size_t>(i)] = static_cast<std::uint16_t>((*v)[i] + 256);
  }
  return code;
}

// Slot codes for every state of a batch, (v + 1) per state with the output
// last; env_begin[b] is the first state column of environment b.
struct BatchCodes {
  std::vector<SlotCode> codes;
  std::vector<int> env_begin;
  int states = 0;

  int examples(int b) const { return env_begin[static_cast<std::size_t>(b) + 1] - env_begin[static_cast<std::size_t>(b)]; }
};

BatchCodes encode_batch(std::span<const Environment* const> envs, int slots) {
  BatchCodes batch;
  batch.env_begin.push_back(0);
  for (const Environment* env : envs) {
    if (env->slots() != slots)
      throw Error(Errc::DimensionMismatch, "environment has " + std::to_string(env->slots()) +
                                               " slots, model expects " + std::to_string(slots));
    for (int e = 0; e < env->num_examples(); ++e) {
      for (int s = 0; s < slots; ++s) batch.codes.push_back(encode(env->live(s) ? &env->value(e, s) : nullptr));
      batch.codes.push_back(encode(&env->output(e)));
    }
    batch.states += env->num_examples();
    batch.env_begin.push_back(batch.states);
  }
  return batch;
}

template <class S>
inline S selu(S x) {
  return x > S(0) ? S(kSeluLambda) * x : S(kSeluLambda * kSeluAlpha) * (std::exp(x) - S(1));
}

// SELU derivative expressed through the activation value.
template <class S>
inline S selu_grad(S a) {
  return a > S(0) ? S(kSeluLambda) : a + S(kSeluLambda * kSeluAlpha);
}

// vu x (20 * 513): block p holds W_p * table^T, so a slot's projection is a
// sum of 20 columns.
template <class S>
Mat<S> projection(const ParamsT<S>& p) {
  const ModelShape& shape = p.shape();
  const int d = shape.embed_dim;
  const auto w = p.tensor(p.var_weight_id());
  const auto table = p.tensor(p.table_id());
  Mat<S> proj(shape.var_units, kMaxListLength * kTableRows);
  for (int pos = 0; pos < kMaxListLength; ++pos)
    proj.middleCols(pos * kTableRows, kTableRows).noalias() = w.middleCols(2 + pos * d, d) * table.transpose();
  return proj;
}

template <class S>
struct ForwardCache {
  BatchCodes codes;
  Mat<S> concat;     // embedded states followed by block layer activations
  Mat<S> block_out;  // block_out x states
  Mat<S> pooled;     // block_out x B
  Mat<S> logits_statement;
  Mat<S> logits_drop;
  Mat<S> logits_function;
};

template <class S>
void run_forward(const ParamsT<S>& p, const Mat<S>& proj, ForwardCache<S>& fc) {
  const ModelShape& shape = p.shape();
  const int vu = shape.var_units;
  const int v1 = shape.slots + 1;
  const int n = fc.codes.states;
  const int layers = shape.block_layers;

  const auto w = p.tensor(p.var_weight_id());
  const auto bias = p.tensor(p.var_bias_id());
  fc.concat.resize(shape.layer_inputs(layers - 1), n);
  for (int c = 0; c < n; ++c) {
    for (int j = 0; j < v1; ++j) {
      const SlotCode& code = fc.codes.codes[static_cast<std::size_t>(c * v1 + j)];
      auto z = fc.concat.col(c).segment(j * vu, vu);
      z = bias.col(0);
      if (code.type == 1) z += w.col(0);
      if (code.type == 2) z += w.col(1);
      for (int pos = 0; pos < kMaxListLength; ++pos) z += proj.col(pos * kTableRows + code.rows[static_cast<std::size_t>(pos)]);
      z = z.unaryExpr([](S x) { return selu(x); });
    }
  }

  Mat<S> z;
  for (int i = 0; i < layers; ++i) {
    const auto wi = p.tensor(p.block_weight_id(i));
    const auto bi = p.tensor(p.block_bias_id(i));
    z.noalias() = wi * fc.concat.topRows(shape.layer_inputs(i));
    z.colwise() += bi.col(0);
    z = z.unaryExpr([](S x) { return selu(x); });
    if (i + 1 < layers)
      fc.concat.middleRows(shape.layer_inputs(i), shape.block_units) = z;
    else
      fc.block_out = std::move(z);
  }

  const int batch = static_cast<int>(fc.codes.env_begin.size()) - 1;
  fc.pooled.resize(shape.block_out, batch);
  for (int b = 0; b < batch; ++b)
    fc.pooled.col(b) = fc.block_out.middleCols(fc.codes.env_begin[static_cast<std::size_t>(b)], fc.codes.examples(b))
                           .rowwise()
                           .mean();

  auto head = [&](int wid, int bid, Mat<S>& out) {
    out.noalias() = p.tensor(wid) * fc.pooled;
    out.colwise() += p.tensor(bid).col(0);
  };
  head(p.statement_weight_id(), p.statement_bias_id(), fc.logits_statement);
  head(p.drop_weight_id(), p.drop_bias_id(), fc.logits_drop);
  head(p.function_weight_id(), p.function_bias_id(), fc.logits_function);
}

template <class S>
Vec<S> log_softmax(const Eigen::Ref<const Vec<S>>& x) {
  const S m = x.maxCoeff();
  const S lse = m + std::log((x.array() - m).exp().sum());
  return x.array() - lse;
}

template <class S>
S sigmoid(S x) {
  return x >= S(0) ? S(1) / (S(1) + std::exp(-x)) : std::exp(x) / (S(1) + std::exp(x));
}

template <class S>
void fill_predictions(const ForwardCache<S>& fc, PredictionBatch& out) {
  const auto batch = fc.pooled.cols();
  out.statement_logprobs.resize(fc.logits_statement.rows(), batch);
  out.drop_probs.resize(fc.logits_drop.rows(), batch);
  out.function_logprobs.resize(fc.logits_function.rows(), batch);
  for (Eigen::Index b = 0; b < batch; ++b) {
    out.statement_logprobs.col(b) = log_softmax<S>(fc.logits_statement.col(b)).template cast<float>();
    out.function_logprobs.col(b) = log_softmax<S>(fc.logits_function.col(b)).template cast<float>();
    for (Eigen::Index j = 0; j < fc.logits_drop.rows(); ++j)
      out.drop_probs(j, b) = static_cast<float>(sigmoid(fc.logits_drop(j, b)));
  }
}

}  // namespace

// ------------------------------------------------------------------ layout

std::vector<TensorSpec> tensor_layout(const ModelShape& shape) {
  std::vector<TensorSpec> layout;
  std::size_t offset = 0;
  auto add = [&](std::string name, int rows, int cols) {
    layout.push_back({std::move(name), rows, cols, offset});
    offset += layout.back().size();
  };
  add("embedding.table", kTableRows, shape.embed_dim);
  add("variable.weight", shape.var_units, shape.variable_width());
  add("variable.bias", shape.var_units, 1);
  for (int i = 0; i < shape.block_layers; ++i) {
    add("block." + std::to_string(i) + ".weight", shape.layer_outputs(i), shape.layer_inputs(i));
    add("block." + std::to_string(i) + ".bias", shape.layer_outputs(i), 1);
  }
  add("head.statement.weight", shape.statements(), shape.block_out);
  add("head.statement.bias", shape.statements(), 1);
  add("head.drop.weight", shape.slots, shape.block_out);
  add("head.drop.bias", shape.slots, 1);
  add("head.function.weight", kNumFunctions, shape.block_out);
  add("head.function.bias", kNumFunctions, 1);
  return layout;
}

template <class S>
ParamsT<S>::ParamsT(const ModelShape& shape) : shape_(shape), layout_(tensor_layout(shape)) {
  if (shape.slots < 1 || shape.embed_dim < 1 || shape.var_units < 1 || shape.block_layers < 1 ||
      shape.block_units < 1 || shape.block_out < 1)
    throw Error(Errc::InvalidArgument, "model dimensions must be positive");
  values_.assign(layout_.back().offset + layout_.back().size(), S(0));
}

template <class S>
typename ParamsT<S>::Map ParamsT<S>::tensor(int id) {
  const TensorSpec& t = layout_.at(static_cast<std::size_t>(id));
  return Map(values_.data() + t.offset, t.rows, t.cols);
}

template <class S>
typename ParamsT<S>::ConstMap ParamsT<S>::tensor(int id) const {
  const TensorSpec& t = layout_.at(static_cast<std::size_t>(id));
  return ConstMap(values_.data() + t.offset, t.rows, t.cols);
}

template <class S>
void ParamsT<S>::set_zero() {
  std::fill(values_.begin(), values_.end(), S(0));
}

template <class S>
bool ParamsT<S>::all_finite() const {
  for (S x : values_)
    if (!std::isfinite(x)) return false;
  return true;
}

template <class S>
template <class T>
ParamsT<T> ParamsT<S>::cast() const {
  ParamsT<T> out(shape_);
  auto dst = out.data();
  for (std::size_t i = 0; i < values_.size(); ++i) dst[i] = static_cast<T>(values_[i]);
  return out;
}

template <class S>
void initialize(ParamsT<S>& params, Rng& rng) {
  const auto& layout = params.layout();
  auto data = params.data();
  for (std::size_t id = 0; id < layout.size(); ++id) {
    const TensorSpec& t = layout[id];
    double bound = 0;
    if (static_cast<int>(id) == params.table_id()) bound = 0.1;
    else if (t.cols > 1) bound = 1.0 / std::sqrt(static_cast<double>(t.cols));
    for (std::size_t i = 0; i < t.size(); ++i)
      data[t.offset + i] = bound == 0 ? S(0) : static_cast<S>(rng.uniform_real(-bound, bound));
  }
}

// ------------------------------------------------------------------ embedding

template <class S>
Eigen::Matrix<S, Eigen::Dynamic, 1> embed_variable(const Value* slot, const ParamsT<S>& params) {
  const int d = params.shape().embed_dim;
  const SlotCode code = encode(slot);
  const auto table = params.tensor(params.table_id());
  Vec<S> out = Vec<S>::Zero(params.shape().variable_width());
  if (code.type == 1) out(0) = S(1);
  if (code.type == 2) out(1) = S(1);
  for (int pos = 0; pos < kMaxListLength; ++pos)
    out.segment(2 + pos * d, d) = table.row(code.rows[static_cast<std::size_t>(pos)]).transpose();
  return out;
}

template <class S>
Eigen::Matrix<S, Eigen::Dynamic, 1> embed_state(const Environment& env, int example, const ParamsT<S>& params) {
  const ModelShape& shape = params.shape();
  if (env.slots() != shape.slots) throw Error(Errc::DimensionMismatch, "slot count differs from the model");
  const auto w = params.tensor(params.var_weight_id());
  const auto bias = params.tensor(params.var_bias_id());
  Vec<S> out(shape.state_width());
  for (int j = 0; j <= shape.slots; ++j) {
    const Value* v = j == shape.slots ? &env.output(example) : (env.live(j) ? &env.value(example, j) : nullptr);
    Vec<S> z = w * embed_variable(v, params) + bias.col(0);
    out.segment(j * shape.var_units, shape.var_units) = z.unaryExpr([](S x) { return selu(x); });
  }
  return out;
}

// ------------------------------------------------------------------ forward

template <class S>
void forward_batch(const ParamsT<S>& params, std::span<const Environment* const> envs, PredictionBatch& out) {
  ForwardCache<S> fc;
  fc.codes = encode_batch(envs, params.shape().slots);
  run_forward(params, projection(params), fc);
  fill_predictions(fc, out);
}

Prediction forward(const Environment& env, const GuideModelParams& params) {
  PredictionBatch batch;
  const Environment* envs[] = {&env};
  forward_batch<float>(params, envs, batch);
  return column(batch, 0);
}

// ------------------------------------------------------------------ loss

double loss(const Prediction& pred, const TrainingRow& row, HeadFlags heads) {
  double total = -pred.statement_logprobs.at(static_cast<std::size_t>(row.next_statement));
  if (heads.function_head) total -= pred.function_logprobs.at(static_cast<std::size_t>(row.next_function));
  if (heads.drop_head) {
    for (std::size_t j = 0; j < row.drop_mask.size(); ++j) {
      if (!row.drop_mask[j]) continue;
      const double p = std::clamp(static_cast<double>(pred.drop_probs.at(j)), 1e-12, 1.0 - 1e-12);
      total -= row.drop_labels[j] ? std::log(p) : std::log(1.0 - p);
    }
  }
  return total;
}

template <class S>
LossParts loss_and_gradient(const ParamsT<S>& p, std::span<const TrainingRow* const> rows, HeadFlags heads,
                            ParamsT<S>* grad) {
  const ModelShape& shape = p.shape();
  const int batch = static_cast<int>(rows.size());
  if (batch == 0) return {};

  std::vector<const Environment*> envs;
  envs.reserve(rows.size());
  for (const TrainingRow* r : rows) envs.push_back(&r->env);

  ForwardCache<S> fc;
  fc.codes = encode_batch(envs, shape.slots);
  const Mat<S> proj = projection(p);
  run_forward(p, proj, fc);

  // Output-layer deltas of the mean loss.
  const S inv_batch = S(1) / S(batch);
  Mat<S> d_statement(fc.logits_statement.rows(), batch);
  Mat<S> d_drop = Mat<S>::Zero(fc.logits_drop.rows(), batch);
  Mat<S> d_function = Mat<S>::Zero(fc.logits_function.rows(), batch);
  LossParts parts;
  for (int b = 0; b < batch; ++b) {
    const TrainingRow& row = *rows[static_cast<std::size_t>(b)];
    const Vec<S> ls = log_softmax<S>(fc.logits_statement.col(b));
    parts.statement -= static_cast<double>(ls(row.next_statement));
    d_statement.col(b) = ls.array().exp();
    d_statement(row.next_statement, b) -= S(1);

    if (heads.function_head) {
      const Vec<S> lf = log_softmax<S>(fc.logits_function.col(b));
      parts.function -= static_cast<double>(lf(row.next_function));
      d_function.col(b) = lf.array().exp();
      d_function(row.next_function, b) -= S(1);
    }
    if (heads.drop_head) {
      for (int j = 0; j < shape.slots; ++j) {
        if (!row.drop_mask[static_cast<std::size_t>(j)]) continue;
        const S z = fc.logits_drop(j, b);
        const S y = row.drop_labels[static_cast<std::size_t>(j)] ? S(1) : S(0);
        parts.drop += static_cast<double>(std::max(z, S(0)) - z * y + std::log1p(std::exp(-std::abs(z))));
        d_drop(j, b) = sigmoid(z) - y;
      }
    }
  }
  parts.statement /= batch;
  parts.function /= batch;
  parts.drop /= batch;
  if (grad == nullptr) return parts;

  if (!(grad->shape() == shape)) *grad = ParamsT<S>(shape);
  grad->set_zero();
  d_statement *= inv_batch;
  d_drop *= inv_batch;
  d_function *= inv_batch;

  auto head_grad = [&](int wid, int bid, const Mat<S>& delta) {
    grad->tensor(wid).noalias() += delta * fc.pooled.transpose();
    grad->tensor(bid).col(0) += delta.rowwise().sum();
  };
  head_grad(p.statement_weight_id(), p.statement_bias_id(), d_statement);
  head_grad(p.drop_weight_id(), p.drop_bias_id(), d_drop);
  head_grad(p.function_weight_id(), p.function_bias_id(), d_function);

  Mat<S> d_pooled = p.tensor(p.statement_weight_id()).transpose() * d_statement;
  d_pooled.noalias() += p.tensor(p.drop_weight_id()).transpose() * d_drop;
  d_pooled.noalias() += p.tensor(p.function_weight_id()).transpose() * d_function;

  const int n = fc.codes.states;
  Mat<S> dz(shape.block_out, n);
  for (int b = 0; b < batch; ++b) {
    const int k = fc.codes.examples(b);
    dz.middleCols(fc.codes.env_begin[static_cast<std::size_t>(b)], k).colwise() = d_pooled.col(b) / S(k);
  }
  dz.array() *= fc.block_out.unaryExpr([](S a) { return selu_grad(a); }).array();

  Mat<S> d_concat = Mat<S>::Zero(fc.concat.rows(), n);
  for (int i = shape.block_layers - 1; i >= 0; --i) {
    const int inputs = shape.layer_inputs(i);
    if (i + 1 < shape.block_layers) {
      dz = d_concat.middleRows(inputs, shape.block_units);
      dz.array() *= fc.concat.middleRows(inputs, shape.block_units).unaryExpr([](S a) { return selu_grad(a); }).array();
    }
    grad->tensor(p.block_weight_id(i)).noalias() += dz * fc.concat.topRows(inputs).transpose();
    grad->tensor(p.block_bias_id(i)).col(0) += dz.rowwise().sum();
    d_concat.topRows(inputs).noalias() += p.tensor(p.block_weight_id(i)).transpose() * dz;
  }

  const int s = shape.state_width();
  Mat<S> d_embed = d_concat.topRows(s);
  d_embed.array() *= fc.concat.topRows(s).unaryExpr([](S a) { return selu_grad(a); }).array();

  const int vu = shape.var_units;
  const int v1 = shape.slots + 1;
  auto g_w = grad->tensor(p.var_weight_id());
  auto g_b = grad->tensor(p.var_bias_id());
  Mat<S> d_proj = Mat<S>::Zero(vu, kMaxListLength * kTableRows);
  for (int c = 0; c < n; ++c) {
    for (int j = 0; j < v1; ++j) {
      const SlotCode& code = fc.codes.codes[static_cast<std::size_t>(c * v1 + j)];
      const auto delta = d_embed.col(c).segment(j * vu, vu);
      g_b.col(0) += delta;
      if (code.type == 1) g_w.col(0) += delta;
      if (code.type == 2) g_w.col(1) += delta;
      for (int pos = 0; pos < kMaxListLength; ++pos)
        d_proj.col(pos * kTableRows + code.rows[static_cast<std::size_t>(pos)]) += delta;
    }
  }
  const int d = shape.embed_dim;
  const auto w = p.tensor(p.var_weight_id());
  const auto table = p.tensor(p.table_id());
  auto g_table = grad->tensor(p.table_id());
  for (int pos = 0; pos < kMaxListLength; ++pos) {
    const auto block = d_proj.middleCols(pos * kTableRows, kTableRows);
    g_w.middleCols(2 + pos * d, d).noalias() += block * table;
    g_table.noalias() += block.transpose() * w.middleCols(2 + pos * d, d);
  }
  return parts;
}

// ------------------------------------------------------------------ GuideModel

GuideModel::GuideModel(GuideModelParams params)
    : params_(std::move(params)), projection_(projection(params_)), vocab_size_(params_.shape().statements()) {}

void GuideModel::predict(std::span<const Environment* const> envs, PredictionBatch& out) const {
  ForwardCache<float> fc;
  fc.codes = encode_batch(envs, params_.shape().slots);
  run_forward(params_, projection_, fc);
  fill_predictions(fc, out);
}

Prediction GuideModel::forward(const Environment& env) const {
  PredictionBatch batch;
  const Environment* envs[] = {&env};
  predict(envs, batch);
  return column(batch, 0);
}

// ------------------------------------------------------------------ instantiations

template class ParamsT<float>;
template class ParamsT<double>;
template ParamsT<double> ParamsT<float>::cast<double>() const;
template ParamsT<float> ParamsT<double>::cast<float>() const;
template ParamsT<float> ParamsT<float>::cast<float>() const;
template void initialize<float>(ParamsT<float>&, Rng&);
template void initialize<double>(ParamsT<double>&, Rng&);
template Vec<float> embed_variable<float>(const Value*, const ParamsT<float>&);
template Vec<double> embed_variable<double>(const Value*, const ParamsT<double>&);
template Vec<float> embed_state<float>(const Environment&, int, const ParamsT<float>&);
template Vec<double> embed_state<double>(const Environment&, int, const ParamsT<double>&);
template void forward_batch<float>(const ParamsT<float>&, std::span<const Environment* const>, PredictionBatch&);
template void forward_batch<double>(const ParamsT<double>&, std::span<const Environment* const>, PredictionBatch&);
template LossParts loss_and_gradient<float>(const ParamsT<float>&, std::span<const TrainingRow* const>, HeadFlags,
                                            ParamsT<float>*);
template LossParts loss_and_gradient<double>(const ParamsT<double>&, std::span<const TrainingRow* const>, HeadFlags,
                                             ParamsT<double>*);

}  // namespace pcc
