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

#include "bib2auth/features.h"

#include <unordered_set>

namespace bib2auth {

namespace {

constexpr size_t kEmbedBatch = 256;

std::string ContentKey(const std::string &title, const std::string &source) {
  std::string key = title;
  key.push_back('\x1f');
  key += source;
  return key;
}

}  // namespace

FeatureEncoder::FeatureEncoder(EmbeddingProvider &provider)
    : provider_(provider) {}

int FeatureEncoder::input1_dim() const {
  return provider_.config().name_dim + provider_.config().content_dim;
}

int FeatureEncoder::input2_dim() const { return provider_.config().name_dim; }

void FeatureEncoder::EmbedPendingNames(std::vector<std::string> *pending) {
  for (size_t start = 0; start < pending->size(); start += kEmbedBatch) {
    const size_t n = std::min(kEmbedBatch, pending->size() - start);
    std::span<const std::string> chunk(pending->data() + start, n);
    std::vector<EmbeddingVector> vecs = provider_.EmbedNames(chunk);
    for (size_t i = 0; i < n; ++i) {
      name_index_.emplace(chunk[i], static_cast<int>(names_.size()));
      names_.push_back(std::move(vecs[i]));
    }
  }
  pending->clear();
}

void FeatureEncoder::EmbedPendingContents(
    std::vector<std::pair<std::string, std::string>> *pending) {
  // Titles and sources go to the provider as one de-duplicated text batch.
  std::vector<std::string> texts;
  std::unordered_map<std::string, size_t> text_slot;
  auto want = [&](const std::string &t) {
    if (text_slot.emplace(t, texts.size()).second) texts.push_back(t);
  };
  for (const auto &[title, source] : *pending) {
    if (CollapseWhitespace(title).empty()) throw Error("empty title");
    want(title);
    if (!CollapseWhitespace(source).empty()) want(source);
  }
  std::vector<EmbeddingVector> vecs;
  for (size_t start = 0; start < texts.size(); start += kEmbedBatch) {
    const size_t n = std::min(kEmbedBatch, texts.size() - start);
    auto part = provider_.EmbedTexts(
        std::span<const std::string>(texts.data() + start, n));
    for (auto &v : part) vecs.push_back(std::move(v));
  }
  for (const auto &[title, source] : *pending) {
    const EmbeddingVector &t = vecs[text_slot.at(title)];
    EmbeddingVector content =
        CollapseWhitespace(source).empty()
            ? t
            : AverageContent(t, &vecs[text_slot.at(source)]);
    content_index_.emplace(ContentKey(title, source),
                           static_cast<int>(contents_.size()));
    contents_.push_back(std::move(content));
  }
  pending->clear();
}

std::vector<EncodedSample> FeatureEncoder::Encode(
    std::span<const TrainingSample> samples) {
  std::vector<std::string> pending_names;
  std::unordered_set<std::string> pending_name_set;
  std::vector<std::pair<std::string, std::string>> pending_contents;
  std::unordered_set<std::string> pending_content_set;
  auto need_name = [&](const std::string &name) {
    if (!name_index_.count(name) && pending_name_set.insert(name).second) {
      pending_names.push_back(name);
    }
  };
  for (const TrainingSample &s : samples) {
    need_name(s.author_variant.rendered);
    need_name(s.coauthor_variant.rendered);
    std::string key = ContentKey(s.title, s.source);
    if (!content_index_.count(key) && pending_content_set.insert(key).second) {
      pending_contents.emplace_back(s.title, s.source);
    }
  }
  EmbedPendingNames(&pending_names);
  EmbedPendingContents(&pending_contents);

  std::vector<EncodedSample> out;
  out.reserve(samples.size());
  for (const TrainingSample &s : samples) {
    out.push_back(EncodedSample{
        name_index_.at(s.author_variant.rendered),
        name_index_.at(s.coauthor_variant.rendered),
        content_index_.at(ContentKey(s.title, s.source))});
  }
  return out;
}

EncodedSample FeatureEncoder::Encode(const std::string &author,
                                     const std::string &coauthor,
                                     const std::string &title,
                                     const std::string &source) {
  TrainingSample s;
  s.author_variant.rendered = author;
  s.coauthor_variant.rendered = coauthor;
  s.title = title;
  s.source = source;
  return Encode(std::span<const TrainingSample>(&s, 1)).at(0);
}

void FeatureEncoder::BuildBatch(std::span<const EncodedSample> encoded,
                                std::span<const size_t> rows,
                                Eigen::MatrixXd *input1,
                                Eigen::MatrixXd *input2) const {
  const int name_dim = provider_.config().name_dim;
  const int content_dim = provider_.config().content_dim;
  const auto batch = static_cast<Eigen::Index>(rows.size());
  input1->resize(name_dim + content_dim, batch);
  input2->resize(name_dim, batch);
  for (Eigen::Index c = 0; c < batch; ++c) {
    const EncodedSample &e = encoded[rows[c]];
    const EmbeddingVector &co = names_[e.coauthor];
    const EmbeddingVector &content = contents_[e.content];
    const EmbeddingVector &author = names_[e.author];
    if (static_cast<int>(co.size()) != name_dim ||
        static_cast<int>(author.size()) != name_dim ||
        static_cast<int>(content.size()) != content_dim) {
      throw ConfigError("embedding dimension does not match the configuration");
    }
    input1->col(c).head(name_dim) =
        Eigen::Map<const Eigen::VectorXd>(co.data(), name_dim);
    input1->col(c).tail(content_dim) =
        Eigen::Map<const Eigen::VectorXd>(content.data(), content_dim);
    input2->col(c) = Eigen::Map<const Eigen::VectorXd>(author.data(), name_dim);
  }
}

}  // namespace bib2auth
