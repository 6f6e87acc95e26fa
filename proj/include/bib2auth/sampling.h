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

#ifndef BIB2AUTH_SAMPLING_H_
#define BIB2AUTH_SAMPLING_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "bib2auth/core.h"

namespace bib2auth {

struct SamplingConfig {
  double coverage = 0.7;
  size_t max_records = 2534;
  uint64_t seed = 42;
};

struct SamplingReport {
  size_t selected_record_count = 0;
  // Distinct authors appearing anywhere in the selection.
  size_t selected_author_count = 0;
  // Authors whose coverage meets the threshold, with their coverage. These
  // are the authors that keep records in the selection.
  std::map<std::string, double> coverage;
  // Authors in the selection below the threshold; they only ride along on
  // records anchored by a covered co-author.
  size_t passenger_author_count = 0;
  int iterations = 0;
};

struct SampleResult {
  std::vector<BibRecord> records;  // corpus order
  SamplingReport report;
};

// Seeds with a pseudo-random subset of at most max_records records, then
// repeatedly drops records none of whose authors reach the coverage
// threshold (coverage = share of the author's corpus records inside the
// selection) until nothing changes.
SampleResult SampleCorpus(std::span<const BibRecord> records,
                          const SamplingConfig &config);

// Same fixed point, starting from an explicit seed selection (indices into
// records).
SampleResult SampleCorpusFromSeed(std::span<const BibRecord> records,
                                  std::vector<size_t> seed_indices,
                                  double coverage);

}  // namespace bib2auth

#endif  // BIB2AUTH_SAMPLING_H_
