// Copyright 2026 The Bib2Auth Authors.
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

#include "bib2auth/network.h"

#include <cmath>

namespace bib2auth {

void NetworkTopology::Validate() const {
  auto positive = [](int w, const char *what) {
    if (w < 1) throw ConfigError(std::string(what) + " must be >= 1");
  };
  positive(branch1_in, "branch1_in");
  positive(branch1_hidden, "branch1_hidden");
  positive(branch2_in, "branch2_in");
  positive(branch2_hidden, "branch2_hidden");
  positive(output, "output width");
  if (trunk_hidden.empty()) throw ConfigError("trunk needs at least one layer");
  for (int w : trunk_hidden) positive(w, "trunk width");
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
    throw ConfigError("dropout_rate must be in [0, 1)");
  }
}

Network::Network(NetworkTopology topology) : topology_(std::move(topology)) {
  topology_.Validate();
  auto add = [&](int in, int out) {
    layers_.push_back(DenseLayer{Eigen::MatrixXd::Zero(out, in),
                                 Eigen::VectorXd::Zero(out)});
  };
  add(topology_.branch1_in, topology_.branch1_hidden);
  add(topology_.branch2_in, topology_.branch2_hidden);
  int prev = topology_.branch1_hidden + topology_.branch2_hidden;
  for (int w : topology_.trunk_hidden) {
    add(prev, w);
    prev = w;
  }
  add(prev, topology_.output);
}

void Network::InitializeWeights(uint64_t seed) {
  Rng rng(seed);
  for (DenseLayer &layer : layers_) {
    const double limit =
        std::sqrt(6.0 / static_cast<double>(layer.weight.rows() +
                                            layer.weight.cols()));
    for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) {
        layer.weight(r, c) = (2.0 * rng.Uniform() - 1.0) * limit;
      }
    }
    layer.bias.setZero();
  }
}

size_t Network::parameter_count() const {
  size_t n = 0;
  for (const DenseLayer &l : layers_) n += l.weight.size() + l.bias.size();
  return n;
}

struct Network::Activations {
  // Pre-activations and ReLU outputs of every hidden layer, in layer order.
  std::vector<Eigen::MatrixXd> pre;
  std::vector<Eigen::MatrixXd> post;
  Eigen::MatrixXd concat;
  Eigen::MatrixXd mask;  // empty when dropout is off
  Eigen::MatrixXd last_hidden;
  Eigen::MatrixXd logits;
};

void Network::CheckInputs(const Eigen::MatrixXd &input1,
                          const Eigen::MatrixXd &input2) const {
  if (input1.rows() != topology_.branch1_in) {
    throw Error("branch1 input layer expects " +
                std::to_string(topology_.branch1_in) + " features, got " +
                std::to_string(input1.rows()));
  }
  if (input2.rows() != topology_.branch2_in) {
    throw Error("branch2 input layer expects " +
                std::to_string(topology_.branch2_in) + " features, got " +
                std::to_string(input2.rows()));
  }
  if (input1.cols() != input2.cols()) {
    throw Error("branch inputs have different batch sizes");
  }
}

void Network::RunForward(const Eigen::MatrixXd &input1,
                         const Eigen::MatrixXd &input2, Rng *dropout_rng,
                         Activations *act) const {
  CheckInputs(input1, input2);
  const Eigen::Index batch = input1.cols();
  auto dense = [&](const DenseLayer &l, const Eigen::MatrixXd &x) {
    Eigen::MatrixXd a = l.weight * x;
    a.colwise() += l.bias;
    return a;
  };
  auto relu = [](const Eigen::MatrixXd &a) { return a.cwiseMax(0.0); };

  act->pre.clear();
  act->post.clear();
  act->pre.push_back(dense(layers_[0], input1));
  act->post.push_back(relu(act->pre.back()));
  act->pre.push_back(dense(layers_[1], input2));
  act->post.push_back(relu(act->pre.back()));

  act->concat.resize(topology_.branch1_hidden + topology_.branch2_hidden, batch);
  act->concat.topRows(topology_.branch1_hidden) = act->post[0];
  act->concat.bottomRows(topology_.branch2_hidden) = act->post[1];

  const Eigen::MatrixXd *prev = &act->concat;
  const size_t trunk = topology_.trunk_hidden.size();
  for (size_t i = 0; i < trunk; ++i) {
    act->pre.push_back(dense(layers_[2 + i], *prev));
    act->post.push_back(relu(act->pre.back()));
    prev = &act->post.back();
  }

  const double p = topology_.dropout_rate;
  if (dropout_rng && p > 0.0) {
    const double scale = 1.0 / (1.0 - p);
    act->mask.resize(prev->rows(), prev->cols());
    for (Eigen::Index c = 0; c < act->mask.cols(); ++c) {
      for (Eigen::Index r = 0; r < act->mask.rows(); ++r) {
        act->mask(r, c) = dropout_rng->Uniform() < p ? 0.0 : scale;
      }
    }
    act->last_hidden = prev->cwiseProduct(act->mask);
  } else {
    act->mask.resize(0, 0);
    act->last_hidden = *prev;
  }
  act->logits = dense(layers_.back(), act->last_hidden);
}

Eigen::MatrixXd Softmax(const Eigen::MatrixXd &logits) {
  Eigen::MatrixXd out(logits.rows(), logits.cols());
  for (Eigen::Index c = 0; c < logits.cols(); ++c) {
    const double max = logits.col(c).maxCoeff();
    out.col(c) = (logits.col(c).array() - max).exp().matrix();
    out.col(c) /= out.col(c).sum();
  }
  return out;
}

Eigen::MatrixXd Network::Forward(const Eigen::MatrixXd &input1,
                                 const Eigen::MatrixXd &input2,
                                 Rng *dropout_rng) const {
  Activations act;
  RunForward(input1, input2, dropout_rng, &act);
  return Softmax(act.logits);
}

Eigen::MatrixXd Network::Logits(const Eigen::MatrixXd &input1,
                                const Eigen::MatrixXd &input2) const {
  Activations act;
  RunForward(input1, input2, nullptr, &act);
  return act.logits;
}

Eigen::VectorXd Network::Predict(std::span<const double> input1,
                                 std::span<const double> input2) const {
  Eigen::MatrixXd x1 = Eigen::Map<const Eigen::VectorXd>(
      input1.data(), static_cast<Eigen::Index>(input1.size()));
  Eigen::MatrixXd x2 = Eigen::Map<const Eigen::VectorXd>(
      input2.data(), static_cast<Eigen::Index>(input2.size()));
  return Forward(x1, x2).col(0);
}

namespace {

// Per-sample -log p[y] computed from logits via log-sum-exp.
Eigen::VectorXd NegativeLogLikelihood(const Eigen::MatrixXd &logits,
                                      std::span<const int> labels) {
  Eigen::VectorXd nll(logits.cols());
  for (Eigen::Index c = 0; c < logits.cols(); ++c) {
    const double max = logits.col(c).maxCoeff();
    const double lse =
        max + std::log((logits.col(c).array() - max).exp().sum());
    nll(c) = lse - logits(labels[c], c);
  }
  return nll;
}

void CheckLabels(std::span<const int> labels, Eigen::Index batch, int k) {
  if (static_cast<Eigen::Index>(labels.size()) != batch) {
    throw Error("label count does not match batch size");
  }
  for (int y : labels) {
    if (y < 0 || y >= k) {
      throw Error("label " + std::to_string(y) + " out of range [0, " +
                  std::to_string(k) + ")");
    }
  }
}

Eigen::VectorXd SampleWeights(std::span<const int> labels,
                              std::span<const double> class_weights, int k,
                              double *total) {
  if (!class_weights.empty() &&
      static_cast<int>(class_weights.size()) != k) {
    throw Error("class weight count does not match the output width");
  }
  Eigen::VectorXd w(labels.size());
  for (size_t i = 0; i < labels.size(); ++i) {
    w(i) = class_weights.empty() ? 1.0 : class_weights[labels[i]];
  }
  *total = w.sum();
  if (!(*total > 0.0)) throw Error("batch has zero total class weight");
  return w;
}

}  // namespace

double Network::Loss(const Eigen::MatrixXd &input1,
                     const Eigen::MatrixXd &input2,
                     std::span<const int> labels,
                     std::span<const double> class_weights,
                     Rng *dropout_rng) const {
  CheckLabels(labels, input1.cols(), topology_.output);
  Activations act;
  RunForward(input1, input2, dropout_rng, &act);
  double total = 0;
  Eigen::VectorXd w =
      SampleWeights(labels, class_weights, topology_.output, &total);
  const double loss =
      w.dot(NegativeLogLikelihood(act.logits, labels)) / total;
  if (!std::isfinite(loss)) throw Error("numerical divergence");
  return loss;
}

double Network::LossAndGradients(const Eigen::MatrixXd &input1,
                                 const Eigen::MatrixXd &input2,
                                 std::span<const int> labels,
                                 std::span<const double> class_weights,
                                 Rng *dropout_rng, Gradients *grads) const {
  CheckLabels(labels, input1.cols(), topology_.output);
  Activations act;
  RunForward(input1, input2, dropout_rng, &act);
  double total = 0;
  const Eigen::VectorXd w =
      SampleWeights(labels, class_weights, topology_.output, &total);
  const double loss =
      w.dot(NegativeLogLikelihood(act.logits, labels)) / total;
  if (!std::isfinite(loss)) throw Error("numerical divergence");

  if (grads->weight.size() != layers_.size()) *grads = ZeroGradients();
  const size_t out_index = layers_.size() - 1;
  const size_t trunk = topology_.trunk_hidden.size();

  // dL/dlogits = w_i / W * (p - onehot(y)).
  Eigen::MatrixXd delta = Softmax(act.logits);
  for (Eigen::Index c = 0; c < delta.cols(); ++c) {
    delta(labels[c], c) -= 1.0;
    delta.col(c) *= w(c) / total;
  }
  grads->weight[out_index].noalias() = delta * act.last_hidden.transpose();
  grads->bias[out_index] = delta.rowwise().sum();
  Eigen::MatrixXd upstream = layers_[out_index].weight.transpose() * delta;
  if (act.mask.size() > 0) upstream = upstream.cwiseProduct(act.mask);

  // Trunk layers, last to first. Hidden activation index of trunk layer i
  // is 2 + i.
  for (size_t i = trunk; i-- > 0;) {
    const size_t li = 2 + i;
    Eigen::MatrixXd da =
        upstream.cwiseProduct((act.pre[li].array() > 0.0).cast<double>().matrix());
    const Eigen::MatrixXd &input = i == 0 ? act.concat : act.post[li - 1];
    grads->weight[li].noalias() = da * input.transpose();
    grads->bias[li] = da.rowwise().sum();
    upstream = layers_[li].weight.transpose() * da;
  }

  const int h1 = topology_.branch1_hidden;
  const int h2 = topology_.branch2_hidden;
  Eigen::MatrixXd da1 = upstream.topRows(h1).cwiseProduct(
      (act.pre[0].array() > 0.0).cast<double>().matrix());
  Eigen::MatrixXd da2 = upstream.bottomRows(h2).cwiseProduct(
      (act.pre[1].array() > 0.0).cast<double>().matrix());
  grads->weight[0].noalias() = da1 * input1.transpose();
  grads->bias[0] = da1.rowwise().sum();
  grads->weight[1].noalias() = da2 * input2.transpose();
  grads->bias[1] = da2.rowwise().sum();
  return loss;
}

void Network::RoundToFloat() {
  auto round = [](double x) {
    return static_cast<double>(static_cast<float>(x));
  };
  for (DenseLayer &l : layers_) {
    l.weight = l.weight.unaryExpr(round);
    l.bias = l.bias.unaryExpr(round);
  }
}

Gradients Network::ZeroGradients() const {
  Gradients g;
  for (const DenseLayer &l : layers_) {
    g.weight.push_back(Eigen::MatrixXd::Zero(l.weight.rows(), l.weight.cols()));
    g.bias.push_back(Eigen::VectorXd::Zero(l.bias.size()));
  }
  return g;
}

bool Network::operator==(const Network &other) const {
  if (!(topology_ == other.topology_) || layers_.size() != other.layers_.size()) {
    return false;
  }
  for (size_t i = 0; i < layers_.size(); ++i) {
    if (layers_[i].weight != other.layers_[i].weight ||
        layers_[i].bias != other.layers_[i].bias) {
      return false;
    }
  }
  return true;
}

std::vector<double> ComputeClassWeights(std::span<const size_t> counts) {
  size_t total = 0, present = 0;
  for (size_t n : counts) {
    total += n;
    if (n > 0) ++present;
  }
  std::vector<double> weights(counts.size(), 0.0);
  for (size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] == 0) continue;
    weights[c] = static_cast<double>(total) /
                 (static_cast<double>(present) * static_cast<double>(counts[c]));
  }
  return weights;
}

void AdamUpdate(std::span<double> params, std::span<const double> grads,
                std::span<double> m, std::span<double> v, int64_t step,
                const AdamConfig &config) {
  if (grads.size() != params.size() || m.size() != params.size() ||
      v.size() != params.size()) {
    throw Error("optimizer state does not match parameter shape");
  }
  if (step < 1) throw Error("Adam step index must be >= 1");
  const double bc1 = 1.0 - std::pow(config.beta1, static_cast<double>(step));
  const double bc2 = 1.0 - std::pow(config.beta2, static_cast<double>(step));
  for (size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    m[i] = config.beta1 * m[i] + (1.0 - config.beta1) * g;
    v[i] = config.beta2 * v[i] + (1.0 - config.beta2) * g * g;
    const double m_hat = m[i] / bc1;
    const double v_hat = v[i] / bc2;
    params[i] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + config.epsilon);
  }
}

AdamState AdamState::For(const Network &net) {
  AdamState s;
  for (const DenseLayer &l : net.layers()) {
    s.m_weight.push_back(Eigen::MatrixXd::Zero(l.weight.rows(), l.weight.cols()));
    s.v_weight.push_back(Eigen::MatrixXd::Zero(l.weight.rows(), l.weight.cols()));
    s.m_bias.push_back(Eigen::VectorXd::Zero(l.bias.size()));
    s.v_bias.push_back(Eigen::VectorXd::Zero(l.bias.size()));
  }
  return s;
}

namespace {

std::span<double> Flat(Eigen::MatrixXd &m) {
  return {m.data(), static_cast<size_t>(m.size())};
}
std::span<double> Flat(Eigen::VectorXd &v) {
  return {v.data(), static_cast<size_t>(v.size())};
}
std::span<const double> Flat(const Eigen::MatrixXd &m) {
  return {m.data(), static_cast<size_t>(m.size())};
}
std::span<const double> Flat(const Eigen::VectorXd &v) {
  return {v.data(), static_cast<size_t>(v.size())};
}

}  // namespace

void AdamStep(Network *net, const Gradients &grads, AdamState *state,
              const AdamConfig &config) {
  auto &layers = net->layers();
  if (grads.weight.size() != layers.size() ||
      state->m_weight.size() != layers.size()) {
    throw Error("optimizer state does not match parameter shape");
  }
  for (size_t i = 0; i < layers.size(); ++i) {
    if (!grads.weight[i].allFinite() || !grads.bias[i].allFinite()) {
      throw Error("non-finite gradient in layer " + std::to_string(i));
    }
  }
  ++state->step;
  for (size_t i = 0; i < layers.size(); ++i) {
    AdamUpdate(Flat(layers[i].weight), Flat(grads.weight[i]),
               Flat(state->m_weight[i]), Flat(state->v_weight[i]), state->step,
               config);
    AdamUpdate(Flat(layers[i].bias), Flat(grads.bias[i]),
               Flat(state->m_bias[i]), Flat(state->v_bias[i]), state->step,
               config);
  }
}

}  // namespace bib2auth
