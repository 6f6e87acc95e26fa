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

#include "bib2auth/embeddings.h"

#include <cmath>

#include "bib2auth/hash.h"
#include "bib2auth/text.h"

namespace bib2auth {

void EmbedderConfig::Validate() const {
  if (name_dim < 8) throw ConfigError("name_dim must be >= 8");
  if (content_dim < 8) throw ConfigError("content_dim must be >= 8");
  if (char_ngram_sizes.empty()) {
    throw ConfigError("char_ngram_sizes must not be empty");
  }
  for (int n : char_ngram_sizes) {
    if (n < 1) throw ConfigError("char n-gram sizes must be positive");
  }
  if (provider == Provider::kRemote && remote_url.empty()) {
    throw ConfigError("remote embedding provider needs a URL");
  }
}

namespace {

void AddSignedHash(std::string_view bytes, uint64_t seed,
                   EmbeddingVector *out) {
  const uint64_t h = Fnv1a64(bytes) ^ seed;
  const double sign = (h >> 63) ? -1.0 : 1.0;
  (*out)[h % out->size()] += sign;
}

void NormalizeInPlace(EmbeddingVector *v) {
  const double norm = L2Norm(*v);
  if (norm == 0.0) return;
  for (double &x : *v) x /= norm;
}

}  // namespace

EmbeddingVector EmbedName(std::string_view name, const EmbedderConfig &cfg) {
  const std::string collapsed = CollapseWhitespace(name);
  if (collapsed.empty()) throw Error("empty name");
  std::vector<char32_t> chars;
  chars.push_back('^');
  for (char32_t c : DecodeUtf8(collapsed)) chars.push_back(FoldCase(c));
  chars.push_back('$');

  // UTF-8 byte offset of every code point, so n-grams are byte slices.
  std::string bytes;
  std::vector<size_t> offsets;
  for (char32_t c : chars) {
    offsets.push_back(bytes.size());
    AppendUtf8(c, &bytes);
  }
  offsets.push_back(bytes.size());

  EmbeddingVector v(static_cast<size_t>(cfg.name_dim), 0.0);
  for (int n : cfg.char_ngram_sizes) {
    for (size_t i = 0; i + n <= chars.size(); ++i) {
      std::string_view gram(bytes.data() + offsets[i],
                            offsets[i + n] - offsets[i]);
      AddSignedHash(gram, cfg.hash_seed, &v);
    }
  }
  if (L2Norm(v) == 0.0) {
    throw Error("internal error: name '" + collapsed +
                "' hashed to the zero vector");
  }
  NormalizeInPlace(&v);
  return v;
}

EmbeddingVector EmbedText(std::string_view text, const EmbedderConfig &cfg) {
  EmbeddingVector v(static_cast<size_t>(cfg.content_dim), 0.0);
  const uint64_t seed = cfg.hash_seed + 1;
  std::string token;
  auto flush = [&] {
    if (token.empty()) return;
    AddSignedHash(FoldCase(token), seed, &v);
    token.clear();
  };
  for (char ch : text) {
    const unsigned char c = static_cast<unsigned char>(ch);
    const bool alnum = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                       (c >= '0' && c <= '9') || c >= 0x80;
    if (alnum) {
      token.push_back(ch);
    } else {
      flush();
    }
  }
  flush();
  NormalizeInPlace(&v);
  return v;
}

EmbeddingVector AverageContent(const EmbeddingVector &title_vec,
                               const EmbeddingVector *source_vec) {
  if (!source_vec) return title_vec;
  if (source_vec->size() != title_vec.size()) {
    throw ConfigError("title and source vectors differ in dimension");
  }
  EmbeddingVector out(title_vec.size());
  for (size_t i = 0; i < out.size(); ++i) {
    out[i] = (title_vec[i] + (*source_vec)[i]) / 2.0;
  }
  return out;
}

EmbeddingVector ContentEmbedding(std::string_view title,
                                 std::string_view source,
                                 const EmbedderConfig &cfg) {
  if (CollapseWhitespace(title).empty()) throw Error("empty title");
  EmbeddingVector t = EmbedText(title, cfg);
  if (CollapseWhitespace(source).empty()) return t;
  EmbeddingVector s = EmbedText(source, cfg);
  return AverageContent(t, &s);
}

double Dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error("dot product of unequal dimensions");
  double sum = 0.0;
  for (size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

double L2Norm(std::span<const double> v) { return std::sqrt(Dot(v, v)); }

double CosineSimilarity(std::span<const double> a, std::span<const double> b) {
  const double na = L2Norm(a), nb = L2Norm(b);
  if (na == 0.0 || nb == 0.0) return 0.0;
  return Dot(a, b) / (na * nb);
}

EmbeddingProvider::EmbeddingProvider(EmbedderConfig config)
    : config_(std::move(config)) {
  config_.Validate();
}

EmbeddingVector EmbeddingProvider::EmbedName(const std::string &name) {
  return std::move(EmbedNames(std::span<const std::string>(&name, 1)).at(0));
}

EmbeddingVector EmbeddingProvider::Content(const std::string &title,
                                           const std::string &source) {
  if (CollapseWhitespace(title).empty()) throw Error("empty title");
  if (CollapseWhitespace(source).empty()) {
    return std::move(EmbedTexts(std::span<const std::string>(&title, 1)).at(0));
  }
  std::vector<std::string> both = {title, source};
  std::vector<EmbeddingVector> vecs = EmbedTexts(both);
  return AverageContent(vecs.at(0), &vecs.at(1));
}

BuiltinEmbedder::BuiltinEmbedder(EmbedderConfig config)
    : EmbeddingProvider(std::move(config)) {}

std::vector<EmbeddingVector> BuiltinEmbedder::EmbedNames(
    std::span<const std::string> names) {
  std::vector<EmbeddingVector> out;
  out.reserve(names.size());
  for (const std::string &n : names) out.push_back(bib2auth::EmbedName(n, config()));
  return out;
}

std::vector<EmbeddingVector> BuiltinEmbedder::EmbedTexts(
    std::span<const std::string> texts) {
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const std::string &t : texts) out.push_back(EmbedText(t, config()));
  return out;
}

std::unique_ptr<EmbeddingProvider> MakeEmbeddingProvider(
    const EmbedderConfig &config) {
  if (config.provider == EmbedderConfig::Provider::kRemote) {
    return std::make_unique<RemoteEmbedder>(config);
  }
  return std::make_unique<BuiltinEmbedder>(config);
}

}  // namespace bib2auth
