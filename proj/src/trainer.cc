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

#include "bib2auth/trainer.h"

#include <cmath>
#include <numeric>

#include "bib2auth/features.h"
#include "bib2auth/hash.h"

namespace bib2auth {

void TrainConfig::Validate() const {
  if (!(adam.learning_rate > 0)) throw ConfigError("learning_rate must be > 0");
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (max_epochs < 1) throw ConfigError("max_epochs must be >= 1");
  if (patience < 1) throw ConfigError("patience must be >= 1");
}

EarlyStopping::EarlyStopping(int patience) : patience_(patience) {
  if (patience < 1) throw ConfigError("patience must be >= 1");
}

bool EarlyStopping::Update(int epoch, double val_loss) {
  if (val_loss < best_loss_) {
    best_loss_ = val_loss;
    best_epoch_ = epoch;
    waited_ = 0;
    return false;
  }
  ++waited_;
  return waited_ >= patience_;
}

bool BestCheckpoint::Update(int epoch, double val_accuracy) {
  if (val_accuracy > best_accuracy_) {
    best_accuracy_ = val_accuracy;
    best_epoch_ = epoch;
    return true;
  }
  return false;
}

NetworkTopology DefaultTopology(const EmbedderConfig &embedder, int classes) {
  NetworkTopology t;
  t.branch1_in = embedder.name_dim + embedder.content_dim;
  t.branch2_in = embedder.name_dim;
  t.output = classes;
  return t;
}

namespace {

constexpr size_t kEvalBatch = 1024;

std::vector<int> Labels(std::span<const TrainingSample> samples) {
  std::vector<int> labels;
  labels.reserve(samples.size());
  for (const TrainingSample &s : samples) labels.push_back(s.label);
  return labels;
}

ValidationResult Evaluate(const Network &net, const FeatureEncoder &encoder,
                          std::span<const EncodedSample> encoded,
                          std::span<const int> labels) {
  double nll_sum = 0;
  size_t correct = 0;
  std::vector<size_t> rows;
  Eigen::MatrixXd x1, x2;
  for (size_t start = 0; start < encoded.size(); start += kEvalBatch) {
    const size_t n = std::min(kEvalBatch, encoded.size() - start);
    rows.resize(n);
    std::iota(rows.begin(), rows.end(), start);
    encoder.BuildBatch(encoded, rows, &x1, &x2);
    const Eigen::MatrixXd logits = net.Logits(x1, x2);
    for (Eigen::Index c = 0; c < logits.cols(); ++c) {
      Eigen::Index argmax = 0;
      const double max = logits.col(c).maxCoeff(&argmax);
      const double lse =
          max + std::log((logits.col(c).array() - max).exp().sum());
      const int y = labels[start + c];
      nll_sum += lse - logits(y, c);
      if (argmax == y) ++correct;
    }
  }
  ValidationResult r;
  r.loss = nll_sum / static_cast<double>(encoded.size());
  r.accuracy = static_cast<double>(correct) / static_cast<double>(encoded.size());
  return r;
}

}  // namespace

TrainResult Train(const DatasetSplit &split, const NetworkTopology &topology,
                  const TrainConfig &config, EmbeddingProvider &provider,
                  const TrainOptions &options) {
  config.Validate();
  topology.Validate();
  if (split.train.empty()) throw Error("empty training set");
  const int k = split.vocabulary.size();
  if (topology.output != k) {
    throw ConfigError("output width " + std::to_string(topology.output) +
                      " does not match vocabulary size " + std::to_string(k));
  }
  const EmbedderConfig &emb = provider.config();
  if (topology.branch1_in != emb.name_dim + emb.content_dim ||
      topology.branch2_in != emb.name_dim) {
    throw ConfigError("topology input widths do not match embedder dims");
  }
  if (split.validation.empty() && !options.validation) {
    throw Error("empty validation set");
  }

  FeatureEncoder encoder(provider);
  const std::vector<EncodedSample> train_x = encoder.Encode(split.train);
  const std::vector<int> train_y = Labels(split.train);
  for (int y : train_y) {
    if (y < 0 || y >= k) throw Error("training label out of range");
  }
  std::vector<EncodedSample> val_x;
  std::vector<int> val_y;
  if (!options.validation) {
    val_x = encoder.Encode(split.validation);
    val_y = Labels(split.validation);
  }

  std::vector<double> class_weights;
  if (config.class_weighting == ClassWeighting::kInverseFrequency) {
    std::vector<size_t> counts(static_cast<size_t>(k), 0);
    for (int y : train_y) ++counts[y];
    class_weights = ComputeClassWeights(counts);
  }

  Network net(topology);
  net.InitializeWeights(config.seed);
  AdamState adam = AdamState::For(net);
  Rng shuffle_rng(MixHash(config.seed, 1));
  Rng dropout_rng(MixHash(config.seed, 2));

  TrainResult result;
  EarlyStopping stopper(config.patience);
  BestCheckpoint checkpoint;
  Network best = net;

  std::vector<size_t> order(train_x.size());
  std::iota(order.begin(), order.end(), size_t{0});
  Gradients grads = net.ZeroGradients();
  Eigen::MatrixXd x1, x2;
  std::vector<int> batch_labels;

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    shuffle_rng.Shuffle(std::span<size_t>(order));
    double loss_sum = 0;
    for (size_t start = 0; start < order.size();
         start += static_cast<size_t>(config.batch_size)) {
      const size_t n =
          std::min(static_cast<size_t>(config.batch_size), order.size() - start);
      std::span<const size_t> rows(order.data() + start, n);
      encoder.BuildBatch(train_x, rows, &x1, &x2);
      batch_labels.resize(n);
      for (size_t i = 0; i < n; ++i) batch_labels[i] = train_y[rows[i]];
      double loss;
      try {
        loss = net.LossAndGradients(x1, x2, batch_labels, class_weights,
                                    &dropout_rng, &grads);
        AdamStep(&net, grads, &adam, config.adam);
      } catch (const Error &e) {
        throw Error("training diverged at epoch " + std::to_string(epoch) +
                    ": " + e.what());
      }
      loss_sum += loss * static_cast<double>(n);
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.train_loss = loss_sum / static_cast<double>(order.size());
    ValidationResult val = options.validation
                               ? options.validation(net, epoch)
                               : Evaluate(net, encoder, val_x, val_y);
    if (!std::isfinite(val.loss) || !std::isfinite(stats.train_loss)) {
      throw Error("numerical divergence at epoch " + std::to_string(epoch));
    }
    stats.val_loss = val.loss;
    stats.val_accuracy = val.accuracy;
    result.history.push_back(stats);
    if (options.on_epoch) options.on_epoch(stats, net);

    if (checkpoint.Update(epoch, val.accuracy)) best = net;
    if (stopper.Update(epoch, val.loss)) break;
  }

  best.RoundToFloat();
  result.model.network = std::move(best);
  result.model.vocabulary = split.vocabulary;
  result.model.embedder = provider.config();
  result.model.metadata.epochs_run = static_cast<int>(result.history.size());
  result.model.metadata.best_epoch = checkpoint.best_epoch();
  result.model.metadata.best_val_accuracy = checkpoint.best_accuracy();
  return result;
}

}  // namespace bib2auth
