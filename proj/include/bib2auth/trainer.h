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

#ifndef BIB2AUTH_TRAINER_H_
#define BIB2AUTH_TRAINER_H_

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "bib2auth/embeddings.h"
#include "bib2auth/model.h"
#include "bib2auth/network.h"
#include "bib2auth/samplegen.h"

namespace bib2auth {

enum class ClassWeighting { kNone, kInverseFrequency };

struct TrainConfig {
  AdamConfig adam;
  int batch_size = 64;
  int max_epochs = 10000;
  int patience = 50;
  uint64_t seed = 42;
  ClassWeighting class_weighting = ClassWeighting::kInverseFrequency;

  void Validate() const;
};

struct EpochStats {
  int epoch = 0;  // 1-based
  double train_loss = 0;
  double val_loss = 0;
  double val_accuracy = 0;
};

// Halts once the validation loss has not strictly improved for `patience`
// consecutive epochs.
class EarlyStopping {
 public:
  explicit EarlyStopping(int patience);

  // Returns true when training should stop after this epoch.
  bool Update(int epoch, double val_loss);

  int best_epoch() const { return best_epoch_; }
  double best_loss() const { return best_loss_; }

 private:
  int patience_;
  double best_loss_ = std::numeric_limits<double>::infinity();
  int best_epoch_ = 0;
  int waited_ = 0;
};

// Tracks the epoch with the highest validation accuracy; ties keep the
// earliest.
class BestCheckpoint {
 public:
  // True when this epoch becomes the new best.
  bool Update(int epoch, double val_accuracy);

  int best_epoch() const { return best_epoch_; }
  double best_accuracy() const { return best_accuracy_; }

 private:
  double best_accuracy_ = -std::numeric_limits<double>::infinity();
  int best_epoch_ = 0;
};

struct ValidationResult {
  double loss = 0;
  double accuracy = 0;
};

struct TrainOptions {
  // Replaces the validation-set evaluation (used to script loss/accuracy
  // sequences).
  std::function<ValidationResult(const Network &, int epoch)> validation;
  std::function<void(const EpochStats &, const Network &)> on_epoch;
};

struct TrainResult {
  TrainedModel model;
  std::vector<EpochStats> history;
};

// Embeds every sample once, then runs seeded mini-batch Adam with dropout
// and class-weighted loss. After each epoch the unweighted validation loss
// drives early stopping and the validation accuracy drives checkpointing.
// The returned model is the best-accuracy snapshot rounded to storage
// precision.
TrainResult Train(const DatasetSplit &split, const NetworkTopology &topology,
                  const TrainConfig &config, EmbeddingProvider &provider,
                  const TrainOptions &options = {});

// Topology defaults sized for the provider dims and vocabulary size.
NetworkTopology DefaultTopology(const EmbedderConfig &embedder, int classes);

}  // namespace bib2auth

#endif  // BIB2AUTH_TRAINER_H_
