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

#ifndef BIB2AUTH_SYNTHETIC_H_
#define BIB2AUTH_SYNTHETIC_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "bib2auth/core.h"

namespace bib2auth {

// Deterministic toy bibliography. Authors belong to topic communities; each
// community has its own title vocabulary and venues, and every author
// publishes with a fixed circle of neighbours. Homonym pairs share a display
// name ("Name 0001" / "Name 0002") and live in different communities.
struct SyntheticCorpusConfig {
  int records = 300;
  int entities = 60;
  int homonym_pairs = 12;
  int communities = 6;
  uint64_t seed = 7;
};

std::vector<BibRecord> GenerateSyntheticCorpus(
    const SyntheticCorpusConfig &config = {});

// DBLP-style XML: <dblp> root, one <article> or <inproceedings> per record.
// Non-ASCII characters are written as numeric character references.
void WriteDblpXml(std::ostream &out, std::span<const BibRecord> records);

// XML with the given escaped text content of a single element.
std::string EscapeXml(std::string_view text);

// Writes DBLP-style XML of at least target_bytes by repeating a small set of
// records under fresh keys. Returns the number of publication elements.
size_t WriteLargeDblpXml(std::ostream &out, size_t target_bytes);

}  // namespace bib2auth

#endif  // BIB2AUTH_SYNTHETIC_H_
