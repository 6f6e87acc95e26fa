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

#ifndef BIB2AUTH_CONFIG_H_
#define BIB2AUTH_CONFIG_H_

#include <optional>
#include <string>
#include <vector>

#include "bib2auth/embeddings.h"
#include "bib2auth/network.h"
#include "bib2auth/samplegen.h"
#include "bib2auth/sampling.h"
#include "bib2auth/trainer.h"
#include "bib2auth/venue.h"

namespace bib2auth {

struct PipelinePaths {
  std::string dblp_xml = "dblp.xml";
  std::string corpus = "corpus.jsonl";
  std::string sample = "sample.jsonl";
  std::string splits_dir = "splits";
  std::string model = "model.b2am";
  std::string history = "history.csv";
  std::string venue_cache = "venues.jsonl";
};

struct VenueOptions {
  bool expand = false;
  // Also expand inproceedings booktitles.
  bool expand_booktitles = false;
  VenueClientConfig client;
};

// Hidden layer shape; the input and output widths come from the embedder
// and the vocabulary.
struct HiddenLayers {
  int branch1 = 512;
  int branch2 = 128;
  std::vector<int> trunk = {512, 256};
  double dropout = 0.30;
};

struct PipelineConfig {
  PipelinePaths paths;
  SamplingConfig sampling;
  SplitFractions fractions;
  uint64_t split_seed = 42;
  VariantPolicy variant_policy = VariantPolicy::All();
  EmbedderConfig embedder;
  HiddenLayers hidden;
  TrainConfig train;
  std::optional<double> threshold;
  int top_k = 5;
  VenueOptions venues;

  // Throws ConfigError on out-of-range values.
  void Validate() const;
  // Applies one seed to sampling, splitting and training.
  void SetSeed(uint64_t seed);
  NetworkTopology Topology(int classes) const;
};

// JSON object with optional sections "paths", "sampling", "split",
// "embedder", "network", "train", "predict", "venues". Missing fields keep
// their defaults; unknown fields are rejected.
PipelineConfig ParseConfig(const std::string &json_text);
PipelineConfig LoadConfigFile(const std::string &path);
std::string ConfigToJson(const PipelineConfig &config);

}  // namespace bib2auth

#endif  // BIB2AUTH_CONFIG_H_
