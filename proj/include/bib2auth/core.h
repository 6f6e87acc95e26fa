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

#ifndef BIB2AUTH_CORE_H_
#define BIB2AUTH_CORE_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bib2auth {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration or mismatched stage artifacts.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A caller-supplied value is missing or malformed.
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

enum class RecordKind { kArticle, kInproceedings, kOther };

std::string_view RecordKindName(RecordKind kind);
RecordKind ParseRecordKind(std::string_view name);

// One author slot of a record. entity_id is the DBLP-style canonical name,
// including a trailing four-digit disambiguation suffix when present.
struct AuthorRef {
  std::string raw_name;
  std::string entity_id;

  bool operator==(const AuthorRef &) const = default;
};

struct BibRecord {
  std::string key;
  RecordKind kind = RecordKind::kArticle;
  std::vector<AuthorRef> authors;
  std::string title;
  std::string source;
  std::optional<int> year;

  bool operator==(const BibRecord &) const = default;
};

// Strips a trailing " NNNN" disambiguation suffix from an entity id.
std::string DisplayName(std::string_view entity_id);

struct AuthorEntity {
  std::string entity_id;
  int class_index = 0;
  std::string display_name;
};

// Bijection between entity ids and class indices [0, K). Indices follow the
// lexicographic order of entity ids, so the mapping only depends on the set
// of ids.
class EntityVocabulary {
 public:
  EntityVocabulary() = default;

  // Builds from an arbitrary list of ids; duplicates are merged.
  static EntityVocabulary FromIds(std::vector<std::string> ids);

  // Takes ids that are already in class order (as persisted). Throws if the
  // list is not strictly sorted.
  static EntityVocabulary FromOrderedIds(std::vector<std::string> ids);

  int size() const { return static_cast<int>(ids_.size()); }
  bool empty() const { return ids_.empty(); }

  // Returns -1 when the id is unknown.
  int IndexOf(std::string_view entity_id) const;
  bool Contains(std::string_view entity_id) const {
    return IndexOf(entity_id) >= 0;
  }
  const std::string &IdAt(int class_index) const;
  AuthorEntity EntityAt(int class_index) const;
  const std::vector<std::string> &ids() const { return ids_; }

  // 64-bit fingerprint of the ordered id list. Stage artifacts carry it so a
  // model and a split built from different vocabularies are caught at load.
  uint64_t Fingerprint() const;

  bool operator==(const EntityVocabulary &other) const {
    return ids_ == other.ids_;
  }

 private:
  std::vector<std::string> ids_;
};

// Collects every entity id of every record. Throws "empty corpus" when
// records is empty.
EntityVocabulary BuildEntityVocabulary(std::span<const BibRecord> records);

// Corpus interchange: one JSON object per line.
std::string RecordToJsonLine(const BibRecord &record);
BibRecord RecordFromJsonLine(std::string_view line);
void WriteCorpus(std::ostream &out, std::span<const BibRecord> records);
std::vector<BibRecord> ReadCorpus(std::istream &in);
void WriteCorpusFile(const std::string &path,
                     std::span<const BibRecord> records);
std::vector<BibRecord> ReadCorpusFile(const std::string &path);

// Collapses runs of ASCII whitespace to one space and trims both ends.
std::string CollapseWhitespace(std::string_view text);

}  // namespace bib2auth

#endif  // BIB2AUTH_CORE_H_
