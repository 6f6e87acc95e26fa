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

#ifndef BIB2AUTH_PIPELINE_H_
#define BIB2AUTH_PIPELINE_H_

#include <iosfwd>
#include <span>
#include <string>

#include "bib2auth/config.h"
#include "bib2auth/dblp_xml.h"
#include "bib2auth/evaluation.h"
#include "bib2auth/sampling.h"
#include "bib2auth/trainer.h"
#include "bib2auth/venue.h"

namespace bib2auth {

// Stage functions behind the command-line tool. Each reads the previous
// stage's artifact from disk and writes its own.

struct IngestSummary {
  IngestStats stats;
  size_t sources_expanded = 0;
};

// DBLP XML -> corpus JSON lines. With venues.expand set, sources are
// expanded through cache and client (client may be null only when
// expansion is off).
IngestSummary RunIngest(const std::string &xml_path,
                        const std::string &corpus_path,
                        const VenueOptions &venues, VenueCache *cache,
                        VenueClient *client, const WarningSink &warn = {});

// Corpus -> sampled corpus.
SampleResult RunSample(const std::string &corpus_path,
                       const std::string &sample_path,
                       const SamplingConfig &config);

// Sampled corpus -> split directory.
DatasetSplit RunPrepare(const std::string &sample_path,
                        const std::string &splits_dir,
                        const SplitFractions &fractions, uint64_t seed,
                        const VariantPolicy &policy);

// Split directory -> model file and per-epoch history CSV.
TrainResult RunTrain(const std::string &splits_dir,
                     const std::string &model_path,
                     const std::string &history_path,
                     const PipelineConfig &config, EmbeddingProvider &provider,
                     const TrainOptions &options = {});

void WriteHistoryCsv(std::ostream &out, std::span<const EpochStats> history);

// Samples of one split ("train", "validation" or "test").
const std::vector<TrainingSample> &SplitSamples(const DatasetSplit &split,
                                                const std::string &name);

// Throws when the model's vocabulary differs from the split's.
void CheckModelMatchesSplit(const TrainedModel &model,
                            const DatasetSplit &split);

}  // namespace bib2auth

#endif  // BIB2AUTH_PIPELINE_H_
