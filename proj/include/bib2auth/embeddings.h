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

#ifndef BIB2AUTH_EMBEDDINGS_H_
#define BIB2AUTH_EMBEDDINGS_H_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bib2auth/core.h"

namespace bib2auth {

using EmbeddingVector = std::vector<double>;

// The remote embedding service failed (transport, status or payload).
class ProviderError : public Error {
 public:
  using Error::Error;
};

struct EmbedderConfig {
  enum class Provider { kBuiltin, kRemote };

  int name_dim = 200;
  int content_dim = 768;
  std::vector<int> char_ngram_sizes = {2, 3};
  uint64_t hash_seed = 0x9e3779b97f4a7c15ULL;
  Provider provider = Provider::kBuiltin;
  std::string remote_url;
  double remote_timeout_seconds = 10.0;
  int remote_retries = 2;

  // Throws ConfigError when dims are below 8, n-gram sizes are not
  // positive, or a remote provider has no URL.
  void Validate() const;

  bool operator==(const EmbedderConfig &) const = default;
};

// Signed character n-gram hashing of a whole rendered name: lowercase,
// wrap in '^' ... '$', hash every n-gram (FNV-1a 64 over its UTF-8 bytes,
// xor hash_seed), add -1 when the top bit is set and +1 otherwise at
// hash % name_dim, then L2-normalize.
EmbeddingVector EmbedName(std::string_view name, const EmbedderConfig &cfg);

// Signed token hashing of free text (tokens split on non-alphanumerics,
// lowercased, seed hash_seed + 1). Text without tokens maps to the zero
// vector.
EmbeddingVector EmbedText(std::string_view text, const EmbedderConfig &cfg);

// Elementwise mean of two content vectors, or the title vector alone when
// source_vec is absent.
EmbeddingVector AverageContent(const EmbeddingVector &title_vec,
                               const EmbeddingVector *source_vec);

// Mean of EmbedText(title) and EmbedText(source); EmbedText(title) when the
// source is empty. Throws on an empty title.
EmbeddingVector ContentEmbedding(std::string_view title,
                                 std::string_view source,
                                 const EmbedderConfig &cfg);

double Dot(std::span<const double> a, std::span<const double> b);
double L2Norm(std::span<const double> v);
// Zero when either vector is zero.
double CosineSimilarity(std::span<const double> a, std::span<const double> b);

// Source of name and content vectors. Implementations must be safe for
// concurrent calls.
class EmbeddingProvider {
 public:
  explicit EmbeddingProvider(EmbedderConfig config);
  virtual ~EmbeddingProvider() = default;

  const EmbedderConfig &config() const { return config_; }

  virtual std::vector<EmbeddingVector> EmbedNames(
      std::span<const std::string> names) = 0;
  virtual std::vector<EmbeddingVector> EmbedTexts(
      std::span<const std::string> texts) = 0;

  EmbeddingVector EmbedName(const std::string &name);
  EmbeddingVector Content(const std::string &title, const std::string &source);

 private:
  EmbedderConfig config_;
};

class BuiltinEmbedder : public EmbeddingProvider {
 public:
  explicit BuiltinEmbedder(EmbedderConfig config);
  std::vector<EmbeddingVector> EmbedNames(
      std::span<const std::string> names) override;
  std::vector<EmbeddingVector> EmbedTexts(
      std::span<const std::string> texts) override;
};

// Client for POST <url>/embed with {"kind": "name"|"content", "texts": [...]}
// answered by {"vectors": [[...], ...]}.
class RemoteEmbedder : public EmbeddingProvider {
 public:
  explicit RemoteEmbedder(EmbedderConfig config);
  std::vector<EmbeddingVector> EmbedNames(
      std::span<const std::string> names) override;
  std::vector<EmbeddingVector> EmbedTexts(
      std::span<const std::string> texts) override;

 private:
  std::vector<EmbeddingVector> Embed(std::span<const std::string> batch,
                                     std::string_view kind);
};

std::vector<EmbeddingVector> RemoteEmbed(std::span<const std::string> batch,
                                         std::string_view kind,
                                         const EmbedderConfig &cfg);

std::unique_ptr<EmbeddingProvider> MakeEmbeddingProvider(
    const EmbedderConfig &config);

}  // namespace bib2auth

#endif  // BIB2AUTH_EMBEDDINGS_H_
