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

#ifndef BIB2AUTH_NETWORK_H_
#define BIB2AUTH_NETWORK_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bib2auth/core.h"
#include "bib2auth/random.h"

namespace bib2auth {

// Shape of the two-branch classifier:
//
//   input1 (co-author name ++ content) -> dense(branch1_hidden) -> ReLU --+
//                                                                         +-> concat
//   input2 (target author name)        -> dense(branch2_hidden) -> ReLU --+
//
//   concat -> [dense(w) -> ReLU for w in trunk_hidden] -> dropout -> dense(K)
//          -> softmax
struct NetworkTopology {
  int branch1_in = 968;
  int branch1_hidden = 512;
  int branch2_in = 200;
  int branch2_hidden = 128;
  std::vector<int> trunk_hidden = {512, 256};
  int output = 1;
  double dropout_rate = 0.30;

  void Validate() const;
  bool operator==(const NetworkTopology &) const = default;
};

struct DenseLayer {
  Eigen::MatrixXd weight;  // out x in
  Eigen::VectorXd bias;    // out
};

// Per-parameter gradients, aligned with Network::layers().
struct Gradients {
  std::vector<Eigen::MatrixXd> weight;
  std::vector<Eigen::VectorXd> bias;
};

class Network {
 public:
  Network() = default;
  // All weights and biases start at zero.
  explicit Network(NetworkTopology topology);

  // Glorot-uniform weights, zero biases.
  void InitializeWeights(uint64_t seed);

  const NetworkTopology &topology() const { return topology_; }

  // Fixed order: branch1, branch2, trunk layers..., output.
  std::vector<DenseLayer> &layers() { return layers_; }
  const std::vector<DenseLayer> &layers() const { return layers_; }
  size_t parameter_count() const;

  // Batched forward pass; one sample per column. Dropout is applied to the
  // last hidden layer only when dropout_rng is non-null. Returns K x batch
  // class probabilities.
  Eigen::MatrixXd Forward(const Eigen::MatrixXd &input1,
                          const Eigen::MatrixXd &input2,
                          Rng *dropout_rng = nullptr) const;

  // Pre-softmax scores, no dropout.
  Eigen::MatrixXd Logits(const Eigen::MatrixXd &input1,
                         const Eigen::MatrixXd &input2) const;

  Eigen::VectorXd Predict(std::span<const double> input1,
                          std::span<const double> input2) const;

  // Weighted mean cross-entropy of a batch and its gradients.
  // class_weights may be empty (all ones); otherwise it has K entries.
  // Throws on out-of-range labels and on a non-finite loss.
  double LossAndGradients(const Eigen::MatrixXd &input1,
                          const Eigen::MatrixXd &input2,
                          std::span<const int> labels,
                          std::span<const double> class_weights,
                          Rng *dropout_rng, Gradients *grads) const;

  // Loss only, no gradients.
  double Loss(const Eigen::MatrixXd &input1, const Eigen::MatrixXd &input2,
              std::span<const int> labels,
              std::span<const double> class_weights,
              Rng *dropout_rng = nullptr) const;

  // Rounds every parameter to the nearest 32-bit float, the precision of
  // the persisted model.
  void RoundToFloat();

  Gradients ZeroGradients() const;

  bool operator==(const Network &other) const;

 private:
  struct Activations;
  void CheckInputs(const Eigen::MatrixXd &input1,
                   const Eigen::MatrixXd &input2) const;
  void RunForward(const Eigen::MatrixXd &input1, const Eigen::MatrixXd &input2,
                  Rng *dropout_rng, Activations *act) const;

  NetworkTopology topology_;
  std::vector<DenseLayer> layers_;
};

// Column-wise softmax, shifted by the column max.
Eigen::MatrixXd Softmax(const Eigen::MatrixXd &logits);

// w_c = N / (K_present * n_c) for classes with samples, 0 otherwise.
std::vector<double> ComputeClassWeights(std::span<const size_t> counts);

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Adam on a flat parameter block. step is the 1-based step index after
// incrementing. m and v are updated in place.
void AdamUpdate(std::span<double> params, std::span<const double> grads,
                std::span<double> m, std::span<double> v, int64_t step,
                const AdamConfig &config);

struct AdamState {
  std::vector<Eigen::MatrixXd> m_weight, v_weight;
  std::vector<Eigen::VectorXd> m_bias, v_bias;
  int64_t step = 0;

  static AdamState For(const Network &net);
};

// One Adam step over every parameter. Gradients are checked for
// non-finite values before anything is modified.
void AdamStep(Network *net, const Gradients &grads, AdamState *state,
              const AdamConfig &config);

}  // namespace bib2auth

#endif  // BIB2AUTH_NETWORK_H_
