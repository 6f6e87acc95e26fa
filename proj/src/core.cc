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

#include "bib2auth/core.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include "bib2auth/hash.h"
#include "json.hpp"

namespace bib2auth {

using json = nlohmann::ordered_json;

std::string_view RecordKindName(RecordKind kind) {
  switch (kind) {
    case RecordKind::kArticle:
      return "article";
    case RecordKind::kInproceedings:
      return "inproceedings";
    case RecordKind::kOther:
      return "other";
  }
  return "other";
}

RecordKind ParseRecordKind(std::string_view name) {
  if (name == "article") return RecordKind::kArticle;
  if (name == "inproceedings") return RecordKind::kInproceedings;
  return RecordKind::kOther;
}

static bool IsAsciiSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

std::string CollapseWhitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (IsAsciiSpace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

std::string DisplayName(std::string_view entity_id) {
  std::string name = CollapseWhitespace(entity_id);
  if (name.size() > 5) {
    std::string_view tail(name.data() + name.size() - 5, 5);
    if (tail[0] == ' ' &&
        std::all_of(tail.begin() + 1, tail.end(),
                    [](char c) { return c >= '0' && c <= '9'; })) {
      name.resize(name.size() - 5);
    }
  }
  return name;
}

EntityVocabulary EntityVocabulary::FromIds(std::vector<std::string> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  EntityVocabulary vocab;
  vocab.ids_ = std::move(ids);
  return vocab;
}

EntityVocabulary EntityVocabulary::FromOrderedIds(
    std::vector<std::string> ids) {
  for (size_t i = 1; i < ids.size(); ++i) {
    if (!(ids[i - 1] < ids[i])) {
      throw ConfigError("vocabulary is not in strict lexicographic order at "
                        "line " + std::to_string(i + 1));
    }
  }
  EntityVocabulary vocab;
  vocab.ids_ = std::move(ids);
  return vocab;
}

int EntityVocabulary::IndexOf(std::string_view entity_id) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), entity_id);
  if (it == ids_.end() || *it != entity_id) return -1;
  return static_cast<int>(it - ids_.begin());
}

const std::string &EntityVocabulary::IdAt(int class_index) const {
  if (class_index < 0 || class_index >= size()) {
    throw Error("class index " + std::to_string(class_index) +
                " out of range [0, " + std::to_string(size()) + ")");
  }
  return ids_[class_index];
}

AuthorEntity EntityVocabulary::EntityAt(int class_index) const {
  const std::string &id = IdAt(class_index);
  return AuthorEntity{id, class_index, DisplayName(id)};
}

uint64_t EntityVocabulary::Fingerprint() const {
  uint64_t h = kFnvOffsetBasis;
  for (const std::string &id : ids_) {
    h = Fnv1a64(id, h);
    h = Fnv1a64(std::string_view("\n", 1), h);
  }
  return h;
}

EntityVocabulary BuildEntityVocabulary(std::span<const BibRecord> records) {
  if (records.empty()) throw Error("empty corpus");
  std::vector<std::string> ids;
  for (const BibRecord &record : records) {
    for (const AuthorRef &author : record.authors) {
      ids.push_back(author.entity_id);
    }
  }
  return EntityVocabulary::FromIds(std::move(ids));
}

std::string RecordToJsonLine(const BibRecord &record) {
  json j;
  j["key"] = record.key;
  j["kind"] = RecordKindName(record.kind);
  json authors = json::array();
  for (const AuthorRef &a : record.authors) {
    authors.push_back(json{{"name", a.raw_name}, {"entity", a.entity_id}});
  }
  j["authors"] = std::move(authors);
  j["title"] = record.title;
  j["source"] = record.source;
  if (record.year) {
    j["year"] = *record.year;
  } else {
    j["year"] = nullptr;
  }
  return j.dump();
}

BibRecord RecordFromJsonLine(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception &e) {
    throw Error(std::string("malformed corpus line: ") + e.what());
  }
  BibRecord record;
  try {
    record.key = j.at("key").get<std::string>();
    record.kind = ParseRecordKind(j.at("kind").get<std::string>());
    for (const auto &a : j.at("authors")) {
      record.authors.push_back(AuthorRef{a.at("name").get<std::string>(),
                                         a.at("entity").get<std::string>()});
    }
    record.title = j.at("title").get<std::string>();
    record.source = j.value("source", std::string());
    if (j.contains("year") && !j["year"].is_null()) {
      record.year = j["year"].get<int>();
    }
  } catch (const json::exception &e) {
    throw Error(std::string("invalid corpus record: ") + e.what());
  }
  if (record.authors.empty()) {
    throw Error("corpus record " + record.key + " has no authors");
  }
  if (CollapseWhitespace(record.title).empty()) {
    throw Error("corpus record " + record.key + " has an empty title");
  }
  return record;
}

void WriteCorpus(std::ostream &out, std::span<const BibRecord> records) {
  for (const BibRecord &record : records) {
    out << RecordToJsonLine(record) << '\n';
  }
}

std::vector<BibRecord> ReadCorpus(std::istream &in) {
  std::vector<BibRecord> records;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      records.push_back(RecordFromJsonLine(line));
    } catch (const Error &e) {
      throw Error("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

void WriteCorpusFile(const std::string &path,
                     std::span<const BibRecord> records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  WriteCorpus(out, records);
  if (!out) throw Error("write failed: " + path);
}

std::vector<BibRecord> ReadCorpusFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return ReadCorpus(in);
}

}  // namespace bib2auth
