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

#include "bib2auth/model.h"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "bib2auth/features.h"
#include "bib2auth/hash.h"

namespace bib2auth {

namespace {

constexpr char kMagic[4] = {'B', '2', 'A', 'M'};

class ByteWriter {
 public:
  void U8(uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void U32(uint32_t v) {
    for (int i = 0; i < 4; ++i) U8(static_cast<uint8_t>(v >> (8 * i)));
  }
  void U64(uint64_t v) {
    for (int i = 0; i < 8; ++i) U8(static_cast<uint8_t>(v >> (8 * i)));
  }
  void F32(float v) { U32(std::bit_cast<uint32_t>(v)); }
  void F64(double v) { U64(std::bit_cast<uint64_t>(v)); }
  void Bytes(std::string_view s) { out_.append(s); }
  void String(std::string_view s) {
    U32(static_cast<uint32_t>(s.size()));
    Bytes(s);
  }
  const std::string &data() const { return out_; }

 private:
  std::string out_;
};

class ByteReader {
 public:
  explicit ByteReader(std::string_view in) : in_(in) {}

  void Need(size_t n) const {
    if (in_.size() - pos_ < n) {
      throw ModelFormatError("unexpected end of model file");
    }
  }
  uint8_t U8() {
    Need(1);
    return static_cast<uint8_t>(in_[pos_++]);
  }
  uint32_t U32() {
    Need(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<uint32_t>(static_cast<uint8_t>(in_[pos_ + i])) << (8 * i);
    }
    pos_ += 4;
    return v;
  }
  uint64_t U64() {
    Need(8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
      v |= static_cast<uint64_t>(static_cast<uint8_t>(in_[pos_ + i])) << (8 * i);
    }
    pos_ += 8;
    return v;
  }
  float F32() { return std::bit_cast<float>(U32()); }
  double F64() { return std::bit_cast<double>(U64()); }
  std::string_view Bytes(size_t n) {
    Need(n);
    std::string_view s = in_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::string String() {
    uint32_t n = U32();
    return std::string(Bytes(n));
  }
  size_t pos() const { return pos_; }
  size_t remaining() const { return in_.size() - pos_; }

 private:
  std::string_view in_;
  size_t pos_ = 0;
};

int CheckedWidth(uint32_t v, const char *what) {
  if (v == 0 || v > (1u << 24)) {
    throw ModelFormatError(std::string("invalid ") + what + " width " +
                           std::to_string(v) + " in model file");
  }
  return static_cast<int>(v);
}

}  // namespace

void TrainedModel::Validate() const {
  const NetworkTopology &t = network.topology();
  if (vocabulary.size() != t.output) {
    throw ConfigError("vocabulary size " + std::to_string(vocabulary.size()) +
                      " does not match output width " +
                      std::to_string(t.output));
  }
  if (t.branch2_in != embedder.name_dim ||
      t.branch1_in != embedder.name_dim + embedder.content_dim) {
    throw ConfigError("network input widths do not match embedder dims");
  }
}

std::string SerializeModel(const TrainedModel &model) {
  model.Validate();
  ByteWriter w;
  w.Bytes(std::string_view(kMagic, 4));
  w.U32(kModelFormatVersion);

  const NetworkTopology &t = model.network.topology();
  w.U32(t.branch1_in);
  w.U32(t.branch1_hidden);
  w.U32(t.branch2_in);
  w.U32(t.branch2_hidden);
  w.U32(static_cast<uint32_t>(t.trunk_hidden.size()));
  for (int width : t.trunk_hidden) w.U32(width);
  w.U32(t.output);
  w.F64(t.dropout_rate);

  const EmbedderConfig &e = model.embedder;
  w.U32(e.name_dim);
  w.U32(e.content_dim);
  w.U32(static_cast<uint32_t>(e.char_ngram_sizes.size()));
  for (int n : e.char_ngram_sizes) w.U32(n);
  w.U64(e.hash_seed);
  w.U8(e.provider == EmbedderConfig::Provider::kRemote ? 1 : 0);
  w.String(e.remote_url);

  w.U32(model.metadata.epochs_run);
  w.U32(model.metadata.best_epoch);
  w.F64(model.metadata.best_val_accuracy);

  w.U32(static_cast<uint32_t>(model.vocabulary.size()));
  for (const std::string &id : model.vocabulary.ids()) w.String(id);

  for (const DenseLayer &layer : model.network.layers()) {
    for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) {
        w.F32(static_cast<float>(layer.weight(r, c)));
      }
    }
    for (Eigen::Index i = 0; i < layer.bias.size(); ++i) {
      w.F32(static_cast<float>(layer.bias(i)));
    }
  }
  w.U64(Fnv1a64(w.data()));
  return w.data();
}

TrainedModel DeserializeModel(std::string_view bytes) {
  ByteReader r(bytes);
  if (bytes.size() < 4) throw ModelFormatError("unexpected end of model file");
  if (r.Bytes(4) != std::string_view(kMagic, 4)) {
    throw ModelFormatError("not a model file (bad magic)");
  }
  const uint32_t version = r.U32();
  if (version != kModelFormatVersion) {
    throw ModelFormatError("unsupported model format version " +
                           std::to_string(version) + " (supported versions: " +
                           std::to_string(kModelFormatVersion) + ")");
  }

  NetworkTopology t;
  t.branch1_in = CheckedWidth(r.U32(), "branch1_in");
  t.branch1_hidden = CheckedWidth(r.U32(), "branch1_hidden");
  t.branch2_in = CheckedWidth(r.U32(), "branch2_in");
  t.branch2_hidden = CheckedWidth(r.U32(), "branch2_hidden");
  const uint32_t trunk = r.U32();
  if (trunk == 0 || trunk > 64) throw ModelFormatError("invalid trunk depth");
  t.trunk_hidden.clear();
  for (uint32_t i = 0; i < trunk; ++i) {
    t.trunk_hidden.push_back(CheckedWidth(r.U32(), "trunk"));
  }
  t.output = CheckedWidth(r.U32(), "output");
  t.dropout_rate = r.F64();

  EmbedderConfig e;
  e.name_dim = CheckedWidth(r.U32(), "name_dim");
  e.content_dim = CheckedWidth(r.U32(), "content_dim");
  const uint32_t ngrams = r.U32();
  if (ngrams > 16) throw ModelFormatError("invalid n-gram size count");
  e.char_ngram_sizes.clear();
  for (uint32_t i = 0; i < ngrams; ++i) {
    e.char_ngram_sizes.push_back(CheckedWidth(r.U32(), "n-gram"));
  }
  e.hash_seed = r.U64();
  e.provider = r.U8() == 1 ? EmbedderConfig::Provider::kRemote
                           : EmbedderConfig::Provider::kBuiltin;
  e.remote_url = r.String();

  TrainingMetadata meta;
  meta.epochs_run = static_cast<int>(r.U32());
  meta.best_epoch = static_cast<int>(r.U32());
  meta.best_val_accuracy = r.F64();

  const uint32_t vocab_size = r.U32();
  if (vocab_size != static_cast<uint32_t>(t.output)) {
    throw ModelFormatError("vocabulary size " + std::to_string(vocab_size) +
                           " does not match output width " +
                           std::to_string(t.output));
  }
  std::vector<std::string> ids;
  for (uint32_t i = 0; i < vocab_size; ++i) ids.push_back(r.String());

  TrainedModel model;
  try {
    model.network = Network(t);
    model.vocabulary = EntityVocabulary::FromOrderedIds(std::move(ids));
  } catch (const ConfigError &err) {
    throw ModelFormatError(std::string("invalid model file: ") + err.what());
  }
  for (DenseLayer &layer : model.network.layers()) {
    r.Need(static_cast<size_t>(layer.weight.size() + layer.bias.size()) * 4);
    for (Eigen::Index row = 0; row < layer.weight.rows(); ++row) {
      for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) {
        layer.weight(row, c) = r.F32();
      }
    }
    for (Eigen::Index i = 0; i < layer.bias.size(); ++i) layer.bias(i) = r.F32();
  }
  const size_t body_size = r.pos();
  const uint64_t checksum = r.U64();
  if (r.remaining() != 0) {
    throw ModelFormatError("trailing bytes after model checksum");
  }
  if (checksum != Fnv1a64(bytes.substr(0, body_size))) {
    throw ModelFormatError("model file checksum mismatch");
  }
  model.embedder = std::move(e);
  model.metadata = meta;
  try {
    model.Validate();
  } catch (const ConfigError &err) {
    throw ModelFormatError(std::string("invalid model file: ") + err.what());
  }
  return model;
}

void SaveModel(const TrainedModel &model, const std::string &path) {
  const std::string bytes = SerializeModel(model);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write model file " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed: " + path);
}

TrainedModel LoadModel(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model file " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  try {
    return DeserializeModel(bytes);
  } catch (const ModelFormatError &e) {
    throw ModelFormatError(path + ": " + e.what());
  }
}

void CheckProviderMatchesModel(const EmbeddingProvider &provider,
                               const TrainedModel &model) {
  const EmbedderConfig &p = provider.config();
  const EmbedderConfig &m = model.embedder;
  if (p.name_dim != m.name_dim || p.content_dim != m.content_dim) {
    throw ConfigError("embedder dims (" + std::to_string(p.name_dim) + ", " +
                      std::to_string(p.content_dim) +
                      ") do not match the model's (" +
                      std::to_string(m.name_dim) + ", " +
                      std::to_string(m.content_dim) + ")");
  }
  if (p.provider == EmbedderConfig::Provider::kBuiltin &&
      (p.char_ngram_sizes != m.char_ngram_sizes || p.hash_seed != m.hash_seed)) {
    throw ConfigError("built-in embedder settings differ from the model's");
  }
}

PredictionResult PredictAuthor(const TrainedModel &model,
                               EmbeddingProvider &provider,
                               const std::string &author,
                               const std::string &coauthor,
                               const std::string &title,
                               const std::string &source, int top_k,
                               std::optional<double> threshold) {
  CheckProviderMatchesModel(provider, model);
  if (CollapseWhitespace(author).empty()) {
    throw InvalidInputError("empty author name");
  }
  if (CollapseWhitespace(coauthor).empty()) {
    throw InvalidInputError("empty co-author name");
  }
  if (CollapseWhitespace(title).empty()) throw InvalidInputError("empty title");
  FeatureEncoder encoder(provider);
  std::vector<EncodedSample> encoded{
      encoder.Encode(author, coauthor, title, source)};
  const size_t row = 0;
  Eigen::MatrixXd x1, x2;
  encoder.BuildBatch(encoded, std::span<const size_t>(&row, 1), &x1, &x2);
  const Eigen::VectorXd probs = model.network.Forward(x1, x2).col(0);

  std::vector<int> order(static_cast<size_t>(probs.size()));
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  const size_t k = std::min<size_t>(std::max(top_k, 1), order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<long>(k),
                    order.end(), [&](int a, int b) {
                      if (probs(a) != probs(b)) return probs(a) > probs(b);
                      return a < b;
                    });
  PredictionResult result;
  for (size_t i = 0; i < k; ++i) {
    result.top.push_back(Prediction{model.vocabulary.IdAt(order[i]), order[i],
                                    probs(order[i])});
  }
  result.unknown = threshold && probs(order[0]) < *threshold;
  return result;
}

}  // namespace bib2auth
