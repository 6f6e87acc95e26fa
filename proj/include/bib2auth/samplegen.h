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

#ifndef BIB2AUTH_SAMPLEGEN_H_
#define BIB2AUTH_SAMPLEGEN_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "bib2auth/core.h"
#include "bib2auth/names.h"

namespace bib2auth {

// One (target variant, co-author variant, title, source) tuple labelled with
// the target's class index.
struct TrainingSample {
  NameVariant author_variant;
  NameVariant coauthor_variant;
  std::string title;
  std::string source;
  int label = -1;
  std::string record_key;
  std::string target_entity;
  std::string coauthor_entity;

  bool operator==(const TrainingSample &) const = default;
};

// How many (target variant, co-author variant) combinations an ordered
// author pair contributes.
struct VariantPolicy {
  enum class Kind { kAll, kFullOnly, kCapped };
  Kind kind = Kind::kAll;
  // Combinations per pair for kCapped, >= 1.
  int cap = 1;

  static VariantPolicy All() { return {Kind::kAll, 0}; }
  static VariantPolicy FullOnly() { return {Kind::kFullOnly, 1}; }
  static VariantPolicy Capped(int n) { return {Kind::kCapped, n}; }

  // "all", "full-only", "capped:<n>".
  static VariantPolicy Parse(const std::string &text);
  std::string ToString() const;
};

// Samples for every ordered pair of distinct authors whose entities are both
// in vocab. A record with fewer than two authors yields nothing.
std::vector<TrainingSample> GeneratePairSamples(const BibRecord &record,
                                                const VariantPolicy &policy,
                                                const EntityVocabulary &vocab);

// Number of samples GeneratePairSamples would emit with every entity in
// the vocabulary.
size_t CountPairSamples(const BibRecord &record, const VariantPolicy &policy);

struct SplitFractions {
  double train = 0.66;
  double validation = 0.17;
  double test = 0.17;
};

struct SplitStats {
  size_t train_records = 0;
  size_t validation_records = 0;
  size_t test_records = 0;
  // Records not placed in any split (not enough in-vocabulary co-authors,
  // or beyond the evaluation quotas).
  size_t unused_records = 0;
  double train_fraction = 0;
  double validation_fraction = 0;
  double test_fraction = 0;
};

struct DatasetSplit {
  std::vector<TrainingSample> train;
  std::vector<TrainingSample> validation;
  std::vector<TrainingSample> test;
  EntityVocabulary vocabulary;
  SplitStats stats;
};

// Assigns whole records (grouped by title) to train/validation/test:
// a seeded shuffle picks the training records, the vocabulary is built from
// them, and validation/test are filled from the remaining records that
// have at least two in-vocabulary authors, keeping only in-vocabulary
// pairs, until the sample-count fractions are met. Throws "degenerate
// split" when any part ends up empty.
DatasetSplit BuildSplit(std::span<const BibRecord> records,
                        const SplitFractions &fractions, uint64_t seed,
                        const VariantPolicy &policy);

// Artifacts: one JSON object per sample line.
std::string SampleToJsonLine(const TrainingSample &sample);
TrainingSample SampleFromJsonLine(std::string_view line);
void WriteSamples(std::ostream &out, std::span<const TrainingSample> samples);
std::vector<TrainingSample> ReadSamples(std::istream &in);

// Split directory layout: train.jsonl, validation.jsonl, test.jsonl,
// vocabulary.txt (entity id per line, line number = class index) and
// manifest.json (counts, fractions, vocabulary fingerprint).
void WriteSplitDir(const std::string &dir, const DatasetSplit &split);
DatasetSplit ReadSplitDir(const std::string &dir);

void WriteVocabulary(std::ostream &out, const EntityVocabulary &vocab);
EntityVocabulary ReadVocabulary(std::istream &in);

}  // namespace bib2auth

#endif  // BIB2AUTH_SAMPLEGEN_H_
