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

#include "bib2auth/sampling.h"

#include <algorithm>
#include <numeric>
#include <set>
#include <unordered_map>

#include "bib2auth/random.h"

namespace bib2auth {

namespace {

// Distinct entity ids of a record.
std::vector<std::string> RecordEntities(const BibRecord &record) {
  std::set<std::string> ids;
  for (const AuthorRef &a : record.authors) ids.insert(a.entity_id);
  return {ids.begin(), ids.end()};
}

}  // namespace

SampleResult SampleCorpusFromSeed(std::span<const BibRecord> records,
                                  std::vector<size_t> seed_indices,
                                  double coverage) {
  if (!(coverage > 0.0 && coverage <= 1.0)) {
    throw ConfigError("coverage must be in (0, 1]");
  }
  std::vector<std::vector<std::string>> entities(records.size());
  std::unordered_map<std::string, size_t> corpus_counts;
  for (size_t i = 0; i < records.size(); ++i) {
    entities[i] = RecordEntities(records[i]);
    for (const std::string &id : entities[i]) ++corpus_counts[id];
  }

  std::sort(seed_indices.begin(), seed_indices.end());
  seed_indices.erase(std::unique(seed_indices.begin(), seed_indices.end()),
                     seed_indices.end());
  for (size_t idx : seed_indices) {
    if (idx >= records.size()) throw Error("seed index out of range");
  }

  std::vector<size_t> selection = std::move(seed_indices);
  std::unordered_map<std::string, size_t> selected_counts;
  auto covered = [&](const std::string &id) {
    // selected / total >= coverage, with slack for rounding at the edge.
    return static_cast<double>(selected_counts[id]) >=
           coverage * static_cast<double>(corpus_counts[id]) - 1e-12;
  };

  int iterations = 0;
  while (true) {
    ++iterations;
    selected_counts.clear();
    for (size_t idx : selection) {
      for (const std::string &id : entities[idx]) ++selected_counts[id];
    }
    std::vector<size_t> kept;
    kept.reserve(selection.size());
    for (size_t idx : selection) {
      if (std::any_of(entities[idx].begin(), entities[idx].end(), covered)) {
        kept.push_back(idx);
      }
    }
    if (kept.size() == selection.size()) break;
    selection = std::move(kept);
  }

  if (selection.empty()) {
    throw Error(
        "sampling converged to empty set; lower coverage or raise "
        "max_records");
  }

  SampleResult result;
  result.report.iterations = iterations;
  for (size_t idx : selection) result.records.push_back(records[idx]);
  result.report.selected_record_count = selection.size();
  result.report.selected_author_count = selected_counts.size();
  for (const auto &[id, count] : selected_counts) {
    if (covered(id)) {
      result.report.coverage[id] = static_cast<double>(count) /
                                   static_cast<double>(corpus_counts[id]);
    } else {
      ++result.report.passenger_author_count;
    }
  }
  return result;
}

SampleResult SampleCorpus(std::span<const BibRecord> records,
                          const SamplingConfig &config) {
  if (config.max_records < 1) throw ConfigError("max_records must be >= 1");
  std::vector<size_t> order(records.size());
  std::iota(order.begin(), order.end(), size_t{0});
  Rng rng(config.seed);
  rng.Shuffle(std::span<size_t>(order));
  if (order.size() > config.max_records) order.resize(config.max_records);
  return SampleCorpusFromSeed(records, std::move(order), config.coverage);
}

}  // namespace bib2auth
