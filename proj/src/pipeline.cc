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

#include "bib2auth/pipeline.h"

#include <cstdio>
#include <filesystem>
#include <fstream>

namespace bib2auth {

namespace {

std::ifstream OpenInput(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return in;
}

std::ofstream OpenOutput(const std::string &path) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  return out;
}

}  // namespace

IngestSummary RunIngest(const std::string &xml_path,
                        const std::string &corpus_path,
                        const VenueOptions &venues, VenueCache *cache,
                        VenueClient *client, const WarningSink &warn) {
  if (venues.expand && (cache == nullptr || client == nullptr)) {
    throw ConfigError("venue expansion needs a cache and a client");
  }
  std::ifstream in = OpenInput(xml_path);
  std::ofstream out = OpenOutput(corpus_path);
  IngestSummary summary;
  summary.stats = ParseDblpXml(in, [&](BibRecord &&record) {
    const bool expandable =
        record.kind == RecordKind::kArticle ||
        (record.kind == RecordKind::kInproceedings && venues.expand_booktitles);
    if (venues.expand && expandable && !record.source.empty()) {
      std::string expanded = ExpandVenue(record.source, *cache, *client, warn);
      if (expanded != record.source) {
        record.source = std::move(expanded);
        ++summary.sources_expanded;
      }
    }
    out << RecordToJsonLine(record) << '\n';
  });
  if (warn) {
    for (const std::string &w : summary.stats.warnings) warn(w);
  }
  if (venues.expand) cache->Save();
  out.flush();
  if (!out) throw Error("failed writing " + corpus_path);
  return summary;
}

SampleResult RunSample(const std::string &corpus_path,
                       const std::string &sample_path,
                       const SamplingConfig &config) {
  const std::vector<BibRecord> corpus = ReadCorpusFile(corpus_path);
  SampleResult result = SampleCorpus(corpus, config);
  WriteCorpusFile(sample_path, result.records);
  return result;
}

DatasetSplit RunPrepare(const std::string &sample_path,
                        const std::string &splits_dir,
                        const SplitFractions &fractions, uint64_t seed,
                        const VariantPolicy &policy) {
  const std::vector<BibRecord> records = ReadCorpusFile(sample_path);
  DatasetSplit split = BuildSplit(records, fractions, seed, policy);
  WriteSplitDir(splits_dir, split);
  return split;
}

TrainResult RunTrain(const std::string &splits_dir,
                     const std::string &model_path,
                     const std::string &history_path,
                     const PipelineConfig &config, EmbeddingProvider &provider,
                     const TrainOptions &options) {
  const DatasetSplit split = ReadSplitDir(splits_dir);
  TrainResult result = Train(split, config.Topology(split.vocabulary.size()),
                             config.train, provider, options);
  SaveModel(result.model, model_path);
  std::ofstream history = OpenOutput(history_path);
  WriteHistoryCsv(history, result.history);
  history.flush();
  if (!history) throw Error("failed writing " + history_path);
  return result;
}

void WriteHistoryCsv(std::ostream &out, std::span<const EpochStats> history) {
  out << "epoch,train_loss,val_loss,val_accuracy\n";
  char line[128];
  for (const EpochStats &e : history) {
    std::snprintf(line, sizeof(line), "%d,%.17g,%.17g,%.17g\n", e.epoch,
                  e.train_loss, e.val_loss, e.val_accuracy);
    out << line;
  }
}

const std::vector<TrainingSample> &SplitSamples(const DatasetSplit &split,
                                                const std::string &name) {
  if (name == "train") return split.train;
  if (name == "validation") return split.validation;
  if (name == "test") return split.test;
  throw ConfigError("unknown split \"" + name +
                    "\" (expected train, validation or test)");
}

void CheckModelMatchesSplit(const TrainedModel &model,
                            const DatasetSplit &split) {
  if (!(model.vocabulary == split.vocabulary)) {
    throw Error("model vocabulary (" +
                std::to_string(model.vocabulary.size()) +
                " entities) does not match split vocabulary (" +
                std::to_string(split.vocabulary.size()) + " entities)");
  }
}

}  // namespace bib2auth
