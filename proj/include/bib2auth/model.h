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

#ifndef BIB2AUTH_MODEL_H_
#define BIB2AUTH_MODEL_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bib2auth/core.h"
#include "bib2auth/embeddings.h"
#include "bib2auth/network.h"

namespace bib2auth {

class ModelFormatError : public Error {
 public:
  using Error::Error;
};

struct TrainingMetadata {
  int epochs_run = 0;
  int best_epoch = 0;
  double best_val_accuracy = 0.0;

  bool operator==(const TrainingMetadata &) const = default;
};

struct TrainedModel {
  Network network;
  EntityVocabulary vocabulary;
  EmbedderConfig embedder;
  TrainingMetadata metadata;

  // Shapes agree with the topology, the vocabulary fills the output layer
  // and the input widths match the embedder dims.
  void Validate() const;
};

// Model file layout, all integers little-endian:
//   "B2AM" | u32 version
//   topology:  u32 branch1_in, branch1_hidden, branch2_in, branch2_hidden,
//              u32 trunk count, u32 trunk widths..., u32 output, f64 dropout
//   embedder:  u32 name_dim, u32 content_dim, u32 n-gram count, u32 sizes...,
//              u64 hash_seed, u8 provider, u32 url length, url bytes
//   metadata:  u32 epochs_run, u32 best_epoch, f64 best_val_accuracy
//   vocabulary: u32 count, then (u32 length, UTF-8 bytes) per class
//   weights:   per layer (branch1, branch2, trunk..., output) the weight
//              matrix row-major then the bias, as f32
//   u64 FNV-1a checksum of every preceding byte
inline constexpr uint32_t kModelFormatVersion = 1;

std::string SerializeModel(const TrainedModel &model);
TrainedModel DeserializeModel(std::string_view bytes);
void SaveModel(const TrainedModel &model, const std::string &path);
TrainedModel LoadModel(const std::string &path);

struct Prediction {
  std::string entity;
  int class_index = 0;
  double probability = 0.0;
};

struct PredictionResult {
  std::vector<Prediction> top;  // descending probability
  // Top probability fell below the requested threshold.
  bool unknown = false;
};

// Ranks entities for one (author, co-author, title, source) mention.
PredictionResult PredictAuthor(const TrainedModel &model,
                               EmbeddingProvider &provider,
                               const std::string &author,
                               const std::string &coauthor,
                               const std::string &title,
                               const std::string &source, int top_k = 5,
                               std::optional<double> threshold = std::nullopt);

// Throws ConfigError when the provider's dims differ from the model's.
void CheckProviderMatchesModel(const EmbeddingProvider &provider,
                               const TrainedModel &model);

}  // namespace bib2auth

#endif  // BIB2AUTH_MODEL_H_
