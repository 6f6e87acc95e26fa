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

#ifndef BIB2AUTH_TESTS_GRADIENT_CHECK_H_
#define BIB2AUTH_TESTS_GRADIENT_CHECK_H_

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "bib2auth/network.h"

namespace bib2auth::testing {

struct GradientCheckResult {
  double max_relative_error = 0;
  size_t parameters = 0;
};

// Compares every analytic gradient with a central difference of step h.
// With dropout_seed set, every loss evaluation replays the same dropout
// mask. Relative error is |a - n| / max(|a|, |n|, 1e-6); the floor keeps
// gradients that are zero up to rounding from dividing by noise.
inline GradientCheckResult CheckGradients(
    Network net, const Eigen::MatrixXd &x1, const Eigen::MatrixXd &x2,
    const std::vector<int> &labels, const std::vector<double> &weights,
    std::optional<uint64_t> dropout_seed, double h = 1e-4) {
  auto loss = [&](const Network &n) {
    std::optional<Rng> rng;
    if (dropout_seed) rng.emplace(*dropout_seed);
    return n.Loss(x1, x2, labels, weights, rng ? &*rng : nullptr);
  };
  Gradients grads = net.ZeroGradients();
  {
    std::optional<Rng> rng;
    if (dropout_seed) rng.emplace(*dropout_seed);
    net.LossAndGradients(x1, x2, labels, weights, rng ? &*rng : nullptr, &grads);
  }
  GradientCheckResult result;
  auto compare = [&](double *param, double analytic) {
    const double saved = *param;
    *param = saved + h;
    const double plus = loss(net);
    *param = saved - h;
    const double minus = loss(net);
    *param = saved;
    const double numeric = (plus - minus) / (2 * h);
    const double denom =
        std::max({std::abs(analytic), std::abs(numeric), 1e-6});
    result.max_relative_error =
        std::max(result.max_relative_error, std::abs(analytic - numeric) / denom);
    ++result.parameters;
  };
  for (size_t l = 0; l < net.layers().size(); ++l) {
    DenseLayer &layer = net.layers()[l];
    for (Eigen::Index i = 0; i < layer.weight.size(); ++i) {
      compare(layer.weight.data() + i, grads.weight[l].data()[i]);
    }
    for (Eigen::Index i = 0; i < layer.bias.size(); ++i) {
      compare(layer.bias.data() + i, grads.bias[l].data()[i]);
    }
  }
  return result;
}

// The small network used for gradient checks.
inline NetworkTopology TinyTopology() {
  NetworkTopology t;
  t.branch1_in = 8;
  t.branch1_hidden = 6;
  t.branch2_in = 5;
  t.branch2_hidden = 4;
  t.trunk_hidden = {6};
  t.output = 3;
  t.dropout_rate = 0.3;
  return t;
}

inline Eigen::MatrixXd RandomMatrix(Rng &rng, int rows, int cols,
                                    double scale = 1.0) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    m.data()[i] = scale * (2 * rng.Uniform() - 1);
  }
  return m;
}

// Tiny network with random weights and biases.
inline Network RandomTinyNetwork(uint64_t seed) {
  Network net(TinyTopology());
  net.InitializeWeights(seed);
  Rng rng(seed + 1000);
  for (DenseLayer &l : net.layers()) {
    l.bias = RandomMatrix(rng, static_cast<int>(l.bias.size()), 1, 0.2);
  }
  return net;
}

}  // namespace bib2auth::testing

#endif  // BIB2AUTH_TESTS_GRADIENT_CHECK_H_
