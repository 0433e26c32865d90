// Copyright 2026 The falsealarm Authors.
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

// Two-layer LSTM binary text classifier with hand-written backpropagation
// through time.
//
//   x_t  = embedding[token_t]          (zero vector for the padding id 0)
//   z_t  = W x_t + U h_{t-1} + b       gate blocks [i; f; o; g]
//   c_t  = f * c_{t-1} + i * g
//   h_t  = o * tanh(c_t)
//   p    = sigmoid(w . h2_T + bias)    h2_T: last hidden state of layer 2
//
// Sequences are batched column-wise: a TokenBatch is (time steps x batch).
// The recurrence runs over every position, padding included.

#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "fa/errors.hpp"
#include "fa/random.hpp"

namespace fa::estimator {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Token ids: one row per time step, one column per sequence.
using TokenBatch = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
struct LstmLayerParams {
  MatrixX<Scalar> input_weights;      // 4H x in
  MatrixX<Scalar> recurrent_weights;  // 4H x H
  VectorX<Scalar> bias;               // 4H

  static LstmLayerParams Zero(Eigen::Index in, Eigen::Index hidden) {
    return {MatrixX<Scalar>::Zero(4 * hidden, in), MatrixX<Scalar>::Zero(4 * hidden, hidden),
            VectorX<Scalar>::Zero(4 * hidden)};
  }

  Eigen::Index hidden() const { return recurrent_weights.cols(); }
  Eigen::Index inputs() const { return input_weights.cols(); }
};

/// All trainable parameters. Flatten order: embedding, lower (W, U, b),
/// upper (W, U, b), head weights, head bias; matrices column-major.
template <typename Scalar>
struct ClassifierParams {
  MatrixX<Scalar> embedding;  // (V + 2) x E; row 0 is never read
  LstmLayerParams<Scalar> lower;
  LstmLayerParams<Scalar> upper;
  VectorX<Scalar> head_weights;  // H
  Scalar head_bias = Scalar(0);

  static ClassifierParams Zero(Eigen::Index vocab_rows, Eigen::Index embed, Eigen::Index hidden) {
    ClassifierParams p;
    p.embedding = MatrixX<Scalar>::Zero(vocab_rows, embed);
    p.lower = LstmLayerParams<Scalar>::Zero(embed, hidden);
    p.upper = LstmLayerParams<Scalar>::Zero(hidden, hidden);
    p.head_weights = VectorX<Scalar>::Zero(hidden);
    p.head_bias = Scalar(0);
    return p;
  }

  template <typename Self, typename Fn>
  static void VisitBlocks(Self& self, Fn&& fn) {
    fn(self.embedding);
    fn(self.lower.input_weights);
    fn(self.lower.recurrent_weights);
    fn(self.lower.bias);
    fn(self.upper.input_weights);
    fn(self.upper.recurrent_weights);
    fn(self.upper.bias);
    fn(self.head_weights);
  }

  Eigen::Index size() const {
    Eigen::Index n = 1;
    VisitBlocks(*this, [&](const auto& m) { n += m.size(); });
    return n;
  }

  VectorX<Scalar> Flatten() const {
    VectorX<Scalar> flat(size());
    Eigen::Index offset = 0;
    VisitBlocks(*this, [&](const auto& m) {
      flat.segment(offset, m.size()) = Eigen::Map<const VectorX<Scalar>>(m.data(), m.size());
      offset += m.size();
    });
    flat(offset) = head_bias;
    return flat;
  }

  void Unflatten(const VectorX<Scalar>& flat) {
    if (flat.size() != size())
      throw CompatibilityError("parameter vector has " + std::to_string(flat.size()) + " entries, expected " +
                               std::to_string(size()));
    Eigen::Index offset = 0;
    VisitBlocks(*this, [&](auto& m) {
      Eigen::Map<VectorX<Scalar>>(m.data(), m.size()) = flat.segment(offset, m.size());
      offset += m.size();
    });
    head_bias = flat(offset);
  }

  void SetZero() {
    VisitBlocks(*this, [](auto& m) { m.setZero(); });
    head_bias = Scalar(0);
  }

  template <typename To>
  ClassifierParams<To> Cast() const {
    ClassifierParams<To> out;
    out.embedding = embedding.template cast<To>();
    out.lower = {lower.input_weights.template cast<To>(), lower.recurrent_weights.template cast<To>(),
                 lower.bias.template cast<To>()};
    out.upper = {upper.input_weights.template cast<To>(), upper.recurrent_weights.template cast<To>(),
                 upper.bias.template cast<To>()};
    out.head_weights = head_weights.template cast<To>();
    out.head_bias = static_cast<To>(head_bias);
    return out;
  }
};

namespace detail {

template <typename Derived>
auto Sigmoid(const Eigen::ArrayBase<Derived>& z) {
  using Scalar = typename Derived::Scalar;
  return Scalar(1) / (Scalar(1) + (-z).exp());
}

/// Per-layer activations kept for backpropagation. cells/hiddens hold T + 1
/// entries with index 0 the zero initial state.
template <typename Scalar>
struct LayerTrace {
  std::vector<MatrixX<Scalar>> inputs;
  std::vector<MatrixX<Scalar>> gates;  // activated [i; f; o; g]
  std::vector<MatrixX<Scalar>> cells;
  std::vector<MatrixX<Scalar>> hiddens;
};

template <typename Scalar>
void LstmStep(const LstmLayerParams<Scalar>& p, const MatrixX<Scalar>& x, const MatrixX<Scalar>& h_prev,
              const MatrixX<Scalar>& c_prev, MatrixX<Scalar>& gates, MatrixX<Scalar>& c, MatrixX<Scalar>& h) {
  const Eigen::Index H = p.hidden();
  gates.noalias() = p.input_weights * x;
  gates.noalias() += p.recurrent_weights * h_prev;
  gates.colwise() += p.bias;
  gates.topRows(3 * H) = Sigmoid(gates.topRows(3 * H).array()).matrix();
  gates.bottomRows(H) = gates.bottomRows(H).array().tanh().matrix();
  c = gates.middleRows(H, H).cwiseProduct(c_prev) + gates.topRows(H).cwiseProduct(gates.bottomRows(H));
  h = gates.middleRows(2 * H, H).cwiseProduct(c.array().tanh().matrix());
}

// Returns d(loss)/d(input_t) for every t and accumulates into `grad`.
template <typename Scalar>
std::vector<MatrixX<Scalar>> LstmBackward(const LstmLayerParams<Scalar>& p, const LayerTrace<Scalar>& trace,
                                          const std::vector<MatrixX<Scalar>>& d_hidden, LstmLayerParams<Scalar>& grad) {
  const Eigen::Index H = p.hidden();
  const auto steps = trace.gates.size();
  const Eigen::Index batch = trace.hiddens.front().cols();
  std::vector<MatrixX<Scalar>> d_inputs(steps);
  MatrixX<Scalar> dh_next = MatrixX<Scalar>::Zero(H, batch);
  MatrixX<Scalar> dc_next = MatrixX<Scalar>::Zero(H, batch);
  MatrixX<Scalar> dz(4 * H, batch);
  for (std::size_t s = steps; s-- > 0;) {
    const MatrixX<Scalar>& gates = trace.gates[s];
    const auto i = gates.topRows(H).array();
    const auto f = gates.middleRows(H, H).array();
    const auto o = gates.middleRows(2 * H, H).array();
    const auto g = gates.bottomRows(H).array();
    const auto c = trace.cells[s + 1].array();
    const auto c_prev = trace.cells[s].array();

    const Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic> dh = d_hidden[s].array() + dh_next.array();
    const Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic> tanh_c = c.tanh();
    const Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic> dc =
        dc_next.array() + dh * o * (Scalar(1) - tanh_c.square());

    dz.topRows(H) = (dc * g * i * (Scalar(1) - i)).matrix();
    dz.middleRows(H, H) = (dc * c_prev * f * (Scalar(1) - f)).matrix();
    dz.middleRows(2 * H, H) = (dh * tanh_c * o * (Scalar(1) - o)).matrix();
    dz.bottomRows(H) = (dc * i * (Scalar(1) - g.square())).matrix();
    dc_next = (dc * f).matrix();

    grad.input_weights.noalias() += dz * trace.inputs[s].transpose();
    grad.recurrent_weights.noalias() += dz * trace.hiddens[s].transpose();
    grad.bias += dz.rowwise().sum();
    d_inputs[s].noalias() = p.input_weights.transpose() * dz;
    dh_next.noalias() = p.recurrent_weights.transpose() * dz;
  }
  return d_inputs;
}

}  // namespace detail

template <typename Scalar>
class LstmClassifier {
 public:
  LstmClassifier() = default;

  /// All-zero parameters for a vocabulary of `vocab_size` words (the table
  /// has two extra rows: padding id 0 and the out-of-vocabulary id V + 1).
  LstmClassifier(Eigen::Index vocab_size, Eigen::Index embed, Eigen::Index hidden)
      : params_(ClassifierParams<Scalar>::Zero(vocab_size + 2, embed, hidden)) {}

  explicit LstmClassifier(ClassifierParams<Scalar> params) : params_(std::move(params)) {
    if (params_.embedding.rows() < 2) throw CompatibilityError("embedding table needs at least two rows");
  }

  /// Uniform initialization: embeddings in +-0.05, Glorot-uniform input and
  /// head weights, recurrent weights in +-1/sqrt(H), zero biases except the
  /// forget gate (1).
  static LstmClassifier Initialized(Eigen::Index vocab_size, Eigen::Index embed, Eigen::Index hidden, Rng& rng) {
    LstmClassifier m(vocab_size, embed, hidden);
    auto fill = [&rng](auto& mat, double limit) {
      for (Eigen::Index k = 0; k < mat.size(); ++k)
        mat.data()[k] = static_cast<Scalar>((2.0 * UniformUnit(rng) - 1.0) * limit);
    };
    auto& p = m.params_;
    fill(p.embedding, 0.05);
    p.embedding.row(0).setZero();
    for (auto* layer : {&p.lower, &p.upper}) {
      const auto in = static_cast<double>(layer->inputs());
      const auto h = static_cast<double>(hidden);
      fill(layer->input_weights, std::sqrt(6.0 / (in + 4.0 * h)));
      fill(layer->recurrent_weights, 1.0 / std::sqrt(h));
      layer->bias.setZero();
      layer->bias.segment(hidden, hidden).setOnes();
    }
    fill(p.head_weights, std::sqrt(6.0 / (static_cast<double>(hidden) + 1.0)));
    p.head_bias = Scalar(0);
    return m;
  }

  const ClassifierParams<Scalar>& params() const { return params_; }
  ClassifierParams<Scalar>& params() { return params_; }

  Eigen::Index vocab_size() const { return params_.embedding.rows() - 2; }
  Eigen::Index embedding_dim() const { return params_.embedding.cols(); }
  Eigen::Index hidden_dim() const { return params_.head_weights.size(); }

  /// Pre-sigmoid scores, one per column of `tokens`.
  VectorX<Scalar> Logits(const TokenBatch& tokens) const {
    const Eigen::Index batch = tokens.cols();
    const Eigen::Index H = hidden_dim();
    MatrixX<Scalar> h1 = MatrixX<Scalar>::Zero(H, batch), c1 = h1, h2 = h1, c2 = h1;
    MatrixX<Scalar> gates(4 * H, batch), c_next, h_next;
    for (Eigen::Index t = 0; t < tokens.rows(); ++t) {
      const MatrixX<Scalar> x = Embed(tokens.row(t));
      detail::LstmStep(params_.lower, x, h1, c1, gates, c_next, h_next);
      c1.swap(c_next);
      h1.swap(h_next);
      detail::LstmStep(params_.upper, h1, h2, c2, gates, c_next, h_next);
      c2.swap(c_next);
      h2.swap(h_next);
    }
    VectorX<Scalar> logits = h2.transpose() * params_.head_weights;
    logits.array() += params_.head_bias;
    return logits;
  }

  /// Probabilities, kept strictly inside (0, 1).
  VectorX<Scalar> PredictBatch(const TokenBatch& tokens) const {
    return Logits(tokens).unaryExpr([](Scalar z) { return Probability(z); });
  }

  Scalar Predict(std::span<const int> tokens) const {
    TokenBatch batch(static_cast<Eigen::Index>(tokens.size()), 1);
    for (std::size_t t = 0; t < tokens.size(); ++t) batch(static_cast<Eigen::Index>(t), 0) = tokens[t];
    return PredictBatch(batch)(0);
  }

  /// Mean binary cross-entropy over the batch; accumulates the gradient of
  /// that mean into `grad` (which must be shaped like params()) when given.
  Scalar LossAndGradient(const TokenBatch& tokens, const VectorX<Scalar>& labels,
                         ClassifierParams<Scalar>* grad) const {
    const Eigen::Index batch = tokens.cols();
    const auto steps = static_cast<std::size_t>(tokens.rows());
    if (labels.size() != batch) throw CompatibilityError("label count does not match batch size");
    if (batch == 0) throw CompatibilityError("empty batch");
    const Eigen::Index H = hidden_dim();

    detail::LayerTrace<Scalar> lower, upper;
    for (auto* tr : {&lower, &upper}) {
      tr->inputs.resize(steps);
      tr->gates.assign(steps, MatrixX<Scalar>(4 * H, batch));
      tr->cells.assign(steps + 1, MatrixX<Scalar>::Zero(H, batch));
      tr->hiddens.assign(steps + 1, MatrixX<Scalar>::Zero(H, batch));
    }
    for (std::size_t s = 0; s < steps; ++s) {
      lower.inputs[s] = Embed(tokens.row(static_cast<Eigen::Index>(s)));
      detail::LstmStep(params_.lower, lower.inputs[s], lower.hiddens[s], lower.cells[s], lower.gates[s],
                       lower.cells[s + 1], lower.hiddens[s + 1]);
      upper.inputs[s] = lower.hiddens[s + 1];
      detail::LstmStep(params_.upper, upper.inputs[s], upper.hiddens[s], upper.cells[s], upper.gates[s],
                       upper.cells[s + 1], upper.hiddens[s + 1]);
    }
    const MatrixX<Scalar>& last = upper.hiddens.back();
    VectorX<Scalar> logits = last.transpose() * params_.head_weights;
    logits.array() += params_.head_bias;

    Scalar loss = Scalar(0);
    for (Eigen::Index b = 0; b < batch; ++b) {
      const Scalar z = logits(b);
      loss += std::max(z, Scalar(0)) - labels(b) * z + std::log1p(std::exp(-std::abs(z)));
    }
    loss /= static_cast<Scalar>(batch);
    if (grad == nullptr) return loss;

    // d(loss)/d(logit_b) = (p_b - y_b) / batch
    const VectorX<Scalar> dlogits =
        (logits.unaryExpr([](Scalar z) { return Scalar(1) / (Scalar(1) + std::exp(-z)); }) - labels) /
        static_cast<Scalar>(batch);
    grad->head_weights.noalias() += last * dlogits;
    grad->head_bias += dlogits.sum();

    std::vector<MatrixX<Scalar>> d_upper(steps, MatrixX<Scalar>::Zero(H, batch));
    if (steps > 0) d_upper.back().noalias() = params_.head_weights * dlogits.transpose();
    const auto d_lower = detail::LstmBackward(params_.upper, upper, d_upper, grad->upper);
    const auto d_embed = detail::LstmBackward(params_.lower, lower, d_lower, grad->lower);
    for (std::size_t s = 0; s < steps; ++s) {
      for (Eigen::Index b = 0; b < batch; ++b) {
        const int id = tokens(static_cast<Eigen::Index>(s), b);
        if (id != 0) grad->embedding.row(id) += d_embed[s].col(b).transpose();
      }
    }
    return loss;
  }

  Scalar Loss(const TokenBatch& tokens, const VectorX<Scalar>& labels) const {
    return LossAndGradient(tokens, labels, nullptr);
  }

  template <typename To>
  LstmClassifier<To> Cast() const {
    return LstmClassifier<To>(params_.template Cast<To>());
  }

  static Scalar Probability(Scalar logit) {
    const Scalar p = Scalar(1) / (Scalar(1) + std::exp(-logit));
    return std::clamp(p, std::numeric_limits<Scalar>::min(), Scalar(1) - std::numeric_limits<Scalar>::epsilon());
  }

 private:
  template <typename Row>
  MatrixX<Scalar> Embed(const Row& ids) const {
    const Eigen::Index batch = ids.size();
    MatrixX<Scalar> x = MatrixX<Scalar>::Zero(embedding_dim(), batch);
    const Eigen::Index max_id = params_.embedding.rows() - 1;
    for (Eigen::Index b = 0; b < batch; ++b) {
      const int id = ids(b);
      if (id < 0 || id > max_id)
        throw EncodingError("token id " + std::to_string(id) + " outside [0, " + std::to_string(max_id) + "]");
      if (id != 0) x.col(b) = params_.embedding.row(id).transpose();
    }
    return x;
  }

  ClassifierParams<Scalar> params_;
};

}  // namespace fa::estimator
