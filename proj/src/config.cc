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

#include "bib2auth/config.h"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace bib2auth {

using nlohmann::json;

void PipelineConfig::Validate() const {
  const double sum = fractions.train + fractions.validation + fractions.test;
  if (fractions.train <= 0 || fractions.validation <= 0 || fractions.test <= 0 ||
      std::abs(sum - 1.0) > 1e-9) {
    throw ConfigError("split fractions must be positive and sum to 1");
  }
  if (!(sampling.coverage > 0 && sampling.coverage <= 1)) {
    throw ConfigError("sampling coverage must be in (0, 1]");
  }
  if (sampling.max_records < 1) {
    throw ConfigError("sampling max_records must be at least 1");
  }
  if (hidden.branch1 < 1 || hidden.branch2 < 1 || hidden.trunk.empty()) {
    throw ConfigError("hidden layer widths must be at least 1");
  }
  for (int w : hidden.trunk) {
    if (w < 1) throw ConfigError("hidden layer widths must be at least 1");
  }
  if (!(hidden.dropout >= 0 && hidden.dropout < 1)) {
    throw ConfigError("dropout must be in [0, 1)");
  }
  if (top_k < 1) throw ConfigError("top_k must be at least 1");
  embedder.Validate();
  train.Validate();
}

void PipelineConfig::SetSeed(uint64_t seed) {
  sampling.seed = seed;
  split_seed = seed;
  train.seed = seed;
}

NetworkTopology PipelineConfig::Topology(int classes) const {
  NetworkTopology t;
  t.branch1_in = embedder.name_dim + embedder.content_dim;
  t.branch1_hidden = hidden.branch1;
  t.branch2_in = embedder.name_dim;
  t.branch2_hidden = hidden.branch2;
  t.trunk_hidden = hidden.trunk;
  t.output = classes;
  t.dropout_rate = hidden.dropout;
  return t;
}

namespace {

// Reads the known members of one section and rejects the rest.
class Section {
 public:
  Section(const json &root, const char *name) : name_(name) {
    if (root.contains(name)) {
      obj_ = &root.at(name);
      if (!obj_->is_object()) {
        throw ConfigError(std::string("config section \"") + name +
                          "\" must be an object");
      }
    }
  }

  template <typename T>
  void Get(const char *key, T *out) {
    seen_.insert(key);
    if (obj_ == nullptr || !obj_->contains(key)) return;
    try {
      *out = obj_->at(key).get<T>();
    } catch (const json::exception &) {
      throw ConfigError(std::string("config field ") + name_ + "." + key +
                        " has the wrong type");
    }
  }

  void Finish() const {
    if (obj_ == nullptr) return;
    for (const auto &[key, value] : obj_->items()) {
      if (!seen_.count(key)) {
        throw ConfigError("unknown config field " + std::string(name_) + "." +
                          key);
      }
    }
  }

 private:
  const char *name_;
  const json *obj_ = nullptr;
  std::set<std::string> seen_;
};

}  // namespace

PipelineConfig ParseConfig(const std::string &json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error &e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> kSections = {
      "paths", "sampling", "split",   "embedder",
      "network", "train", "predict", "venues"};
  for (const auto &[key, value] : root.items()) {
    if (!kSections.count(key)) {
      throw ConfigError("unknown config section \"" + key + "\"");
    }
  }

  PipelineConfig c;
  {
    Section s(root, "paths");
    s.Get("dblp_xml", &c.paths.dblp_xml);
    s.Get("corpus", &c.paths.corpus);
    s.Get("sample", &c.paths.sample);
    s.Get("splits_dir", &c.paths.splits_dir);
    s.Get("model", &c.paths.model);
    s.Get("history", &c.paths.history);
    s.Get("venue_cache", &c.paths.venue_cache);
    s.Finish();
  }
  {
    Section s(root, "sampling");
    s.Get("coverage", &c.sampling.coverage);
    s.Get("max_records", &c.sampling.max_records);
    s.Get("seed", &c.sampling.seed);
    s.Finish();
  }
  {
    Section s(root, "split");
    std::string policy = c.variant_policy.ToString();
    s.Get("train", &c.fractions.train);
    s.Get("validation", &c.fractions.validation);
    s.Get("test", &c.fractions.test);
    s.Get("seed", &c.split_seed);
    s.Get("variant_policy", &policy);
    s.Finish();
    c.variant_policy = VariantPolicy::Parse(policy);
  }
  {
    Section s(root, "embedder");
    std::string provider = "builtin";
    s.Get("name_dim", &c.embedder.name_dim);
    s.Get("content_dim", &c.embedder.content_dim);
    s.Get("char_ngram_sizes", &c.embedder.char_ngram_sizes);
    s.Get("hash_seed", &c.embedder.hash_seed);
    s.Get("provider", &provider);
    s.Get("remote_url", &c.embedder.remote_url);
    s.Get("timeout_seconds", &c.embedder.remote_timeout_seconds);
    s.Get("retries", &c.embedder.remote_retries);
    s.Finish();
    if (provider == "builtin") {
      c.embedder.provider = EmbedderConfig::Provider::kBuiltin;
    } else if (provider == "remote") {
      c.embedder.provider = EmbedderConfig::Provider::kRemote;
    } else {
      throw ConfigError("embedder.provider must be \"builtin\" or \"remote\"");
    }
  }
  {
    Section s(root, "network");
    s.Get("branch1_hidden", &c.hidden.branch1);
    s.Get("branch2_hidden", &c.hidden.branch2);
    s.Get("trunk_hidden", &c.hidden.trunk);
    s.Get("dropout", &c.hidden.dropout);
    s.Finish();
  }
  {
    Section s(root, "train");
    std::string weighting = "inverse-frequency";
    s.Get("learning_rate", &c.train.adam.learning_rate);
    s.Get("beta1", &c.train.adam.beta1);
    s.Get("beta2", &c.train.adam.beta2);
    s.Get("epsilon", &c.train.adam.epsilon);
    s.Get("batch_size", &c.train.batch_size);
    s.Get("max_epochs", &c.train.max_epochs);
    s.Get("patience", &c.train.patience);
    s.Get("seed", &c.train.seed);
    s.Get("class_weighting", &weighting);
    s.Finish();
    if (weighting == "inverse-frequency") {
      c.train.class_weighting = ClassWeighting::kInverseFrequency;
    } else if (weighting == "none") {
      c.train.class_weighting = ClassWeighting::kNone;
    } else {
      throw ConfigError(
          "train.class_weighting must be \"inverse-frequency\" or \"none\"");
    }
  }
  {
    Section s(root, "predict");
    json threshold;
    s.Get("threshold", &threshold);
    if (threshold.is_number()) {
      c.threshold = threshold.get<double>();
    } else if (!threshold.is_null()) {
      throw ConfigError("config field predict.threshold must be a number or null");
    }
    s.Get("top_k", &c.top_k);
    s.Finish();
  }
  {
    Section s(root, "venues");
    s.Get("expand", &c.venues.expand);
    s.Get("expand_booktitles", &c.venues.expand_booktitles);
    s.Get("base_url", &c.venues.client.base_url);
    s.Get("timeout_seconds", &c.venues.client.timeout_seconds);
    s.Get("retries", &c.venues.client.retries);
    s.Finish();
  }
  c.Validate();
  return c;
}

PipelineConfig LoadConfigFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream text;
  text << in.rdbuf();
  return ParseConfig(text.str());
}

std::string ConfigToJson(const PipelineConfig &c) {
  nlohmann::ordered_json j;
  j["paths"] = {{"dblp_xml", c.paths.dblp_xml},
                {"corpus", c.paths.corpus},
                {"sample", c.paths.sample},
                {"splits_dir", c.paths.splits_dir},
                {"model", c.paths.model},
                {"history", c.paths.history},
                {"venue_cache", c.paths.venue_cache}};
  j["sampling"] = {{"coverage", c.sampling.coverage},
                   {"max_records", c.sampling.max_records},
                   {"seed", c.sampling.seed}};
  j["split"] = {{"train", c.fractions.train},
                {"validation", c.fractions.validation},
                {"test", c.fractions.test},
                {"seed", c.split_seed},
                {"variant_policy", c.variant_policy.ToString()}};
  j["embedder"] = {
      {"name_dim", c.embedder.name_dim},
      {"content_dim", c.embedder.content_dim},
      {"char_ngram_sizes", c.embedder.char_ngram_sizes},
      {"hash_seed", c.embedder.hash_seed},
      {"provider", c.embedder.provider == EmbedderConfig::Provider::kRemote
                       ? "remote"
                       : "builtin"},
      {"remote_url", c.embedder.remote_url},
      {"timeout_seconds", c.embedder.remote_timeout_seconds},
      {"retries", c.embedder.remote_retries}};
  j["network"] = {{"branch1_hidden", c.hidden.branch1},
                  {"branch2_hidden", c.hidden.branch2},
                  {"trunk_hidden", c.hidden.trunk},
                  {"dropout", c.hidden.dropout}};
  j["train"] = {
      {"learning_rate", c.train.adam.learning_rate},
      {"beta1", c.train.adam.beta1},
      {"beta2", c.train.adam.beta2},
      {"epsilon", c.train.adam.epsilon},
      {"batch_size", c.train.batch_size},
      {"max_epochs", c.train.max_epochs},
      {"patience", c.train.patience},
      {"seed", c.train.seed},
      {"class_weighting", c.train.class_weighting == ClassWeighting::kNone
                              ? "none"
                              : "inverse-frequency"}};
  j["predict"] = {{"threshold", c.threshold ? json(*c.threshold) : json()},
                  {"top_k", c.top_k}};
  j["venues"] = {{"expand", c.venues.expand},
                 {"expand_booktitles", c.venues.expand_booktitles},
                 {"base_url", c.venues.client.base_url},
                 {"timeout_seconds", c.venues.client.timeout_seconds},
                 {"retries", c.venues.client.retries}};
  return j.dump(2);
}

}  // namespace bib2auth
