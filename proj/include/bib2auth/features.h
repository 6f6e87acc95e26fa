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

#ifndef BIB2AUTH_FEATURES_H_
#define BIB2AUTH_FEATURES_H_

#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "bib2auth/embeddings.h"
#include "bib2auth/samplegen.h"

namespace bib2auth {

// Cache slots of one sample's three inputs.
struct EncodedSample {
  int author = -1;
  int coauthor = -1;
  int content = -1;
};

// Embeds sample strings once (cache keyed by the exact string) and
// assembles network input batches from the cache.
class FeatureEncoder {
 public:
  explicit FeatureEncoder(EmbeddingProvider &provider);

  std::vector<EncodedSample> Encode(std::span<const TrainingSample> samples);
  EncodedSample Encode(const std::string &author, const std::string &coauthor,
                       const std::string &title, const std::string &source);

  int input1_dim() const;
  int input2_dim() const;

  // Columns follow the order of rows: input1 = [co-author name; content],
  // input2 = target author name.
  void BuildBatch(std::span<const EncodedSample> encoded,
                  std::span<const size_t> rows, Eigen::MatrixXd *input1,
                  Eigen::MatrixXd *input2) const;

  size_t cached_names() const { return names_.size(); }
  size_t cached_contents() const { return contents_.size(); }

 private:
  void EmbedPendingNames(std::vector<std::string> *pending);
  void EmbedPendingContents(
      std::vector<std::pair<std::string, std::string>> *pending);

  EmbeddingProvider &provider_;
  std::unordered_map<std::string, int> name_index_;
  std::vector<EmbeddingVector> names_;
  std::unordered_map<std::string, int> content_index_;
  std::vector<EmbeddingVector> contents_;
};

}  // namespace bib2auth

#endif  // BIB2AUTH_FEATURES_H_
