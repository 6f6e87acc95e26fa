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

#include "bib2auth/samplegen.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>

#include "bib2auth/hash.h"
#include "bib2auth/random.h"
#include "json.hpp"

namespace bib2auth {

using json = nlohmann::ordered_json;

VariantPolicy VariantPolicy::Parse(const std::string &text) {
  if (text == "all") return All();
  if (text == "full-only") return FullOnly();
  if (text.rfind("capped:", 0) == 0) {
    int n = 0;
    try {
      n = std::stoi(text.substr(7));
    } catch (const std::exception &) {
      n = 0;
    }
    if (n < 1) throw ConfigError("capped variant policy needs n >= 1: " + text);
    return Capped(n);
  }
  throw ConfigError("unknown variant policy '" + text +
                    "' (expected all, full-only or capped:<n>)");
}

std::string VariantPolicy::ToString() const {
  switch (kind) {
    case Kind::kAll:
      return "all";
    case Kind::kFullOnly:
      return "full-only";
    case Kind::kCapped:
      return "capped:" + std::to_string(cap);
  }
  return "all";
}

namespace {

struct PairCombos {
  size_t target_variants;
  size_t coauthor_variants;
};

size_t CombosUnderPolicy(const VariantPolicy &policy, size_t total) {
  switch (policy.kind) {
    case VariantPolicy::Kind::kAll:
      return total;
    case VariantPolicy::Kind::kFullOnly:
      return 1;
    case VariantPolicy::Kind::kCapped:
      return std::min<size_t>(total, static_cast<size_t>(policy.cap));
  }
  return total;
}

// Indices into the target x co-author variant grid, FULL x FULL first.
std::vector<size_t> ChooseCombos(const VariantPolicy &policy, size_t total,
                                 uint64_t seed) {
  size_t count = CombosUnderPolicy(policy, total);
  std::vector<size_t> chosen;
  if (policy.kind != VariantPolicy::Kind::kCapped || count == total) {
    chosen.resize(count);
    std::iota(chosen.begin(), chosen.end(), size_t{0});
    return chosen;
  }
  std::vector<size_t> rest(total - 1);
  std::iota(rest.begin(), rest.end(), size_t{1});
  Rng rng(seed);
  for (size_t i = 0; i + 1 < count; ++i) {
    size_t j = i + rng.Below(rest.size() - i);
    std::swap(rest[i], rest[j]);
  }
  rest.resize(count - 1);
  std::sort(rest.begin(), rest.end());
  chosen.push_back(0);
  chosen.insert(chosen.end(), rest.begin(), rest.end());
  return chosen;
}

}  // namespace

std::vector<TrainingSample> GeneratePairSamples(const BibRecord &record,
                                                const VariantPolicy &policy,
                                                const EntityVocabulary &vocab) {
  std::vector<TrainingSample> samples;
  const size_t k = record.authors.size();
  if (k < 2) return samples;
  std::vector<std::vector<NameVariant>> variants(k);
  for (size_t i = 0; i < k; ++i) {
    variants[i] = GenerateVariants(NormalizeName(record.authors[i].entity_id));
  }
  const uint64_t record_hash = Fnv1a64(record.key);
  for (size_t t = 0; t < k; ++t) {
    const std::string &target = record.authors[t].entity_id;
    const int label = vocab.IndexOf(target);
    if (label < 0) continue;
    for (size_t c = 0; c < k; ++c) {
      const std::string &coauthor = record.authors[c].entity_id;
      if (c == t || coauthor == target || !vocab.Contains(coauthor)) continue;
      const size_t vc = variants[c].size();
      const size_t total = variants[t].size() * vc;
      for (size_t combo :
           ChooseCombos(policy, total, MixHash(record_hash, t * k + c))) {
        TrainingSample s;
        s.author_variant = variants[t][combo / vc];
        s.coauthor_variant = variants[c][combo % vc];
        s.title = record.title;
        s.source = record.source;
        s.label = label;
        s.record_key = record.key;
        s.target_entity = target;
        s.coauthor_entity = coauthor;
        samples.push_back(std::move(s));
      }
    }
  }
  return samples;
}

size_t CountPairSamples(const BibRecord &record, const VariantPolicy &policy) {
  const size_t k = record.authors.size();
  if (k < 2) return 0;
  std::vector<size_t> counts(k);
  for (size_t i = 0; i < k; ++i) {
    counts[i] = GenerateVariants(NormalizeName(record.authors[i].entity_id)).size();
  }
  size_t n = 0;
  for (size_t t = 0; t < k; ++t) {
    for (size_t c = 0; c < k; ++c) {
      if (c == t || record.authors[c].entity_id == record.authors[t].entity_id) {
        continue;
      }
      n += CombosUnderPolicy(policy, counts[t] * counts[c]);
    }
  }
  return n;
}

namespace {

// Records sharing a title travel together so titles never straddle splits.
struct TitleGroup {
  std::vector<size_t> records;
  size_t raw_samples = 0;
};

struct EvalPool {
  std::vector<size_t> groups;
  std::vector<size_t> samples;  // filtered sample count per pool group
  size_t total = 0;
};

size_t InVocabularyAuthors(const BibRecord &record,
                           const EntityVocabulary &vocab) {
  std::set<std::string_view> ids;
  for (const AuthorRef &a : record.authors) {
    if (vocab.Contains(a.entity_id)) ids.insert(a.entity_id);
  }
  return ids.size();
}

EntityVocabulary TrainVocabulary(std::span<const BibRecord> records,
                                 const std::vector<TitleGroup> &groups,
                                 size_t train_groups) {
  std::vector<std::string> ids;
  for (size_t g = 0; g < train_groups; ++g) {
    for (size_t r : groups[g].records) {
      // Only authors that become training targets join the vocabulary.
      std::set<std::string_view> distinct;
      for (const AuthorRef &a : records[r].authors) distinct.insert(a.entity_id);
      if (distinct.size() < 2) continue;
      for (const AuthorRef &a : records[r].authors) ids.push_back(a.entity_id);
    }
  }
  return EntityVocabulary::FromIds(std::move(ids));
}

EvalPool BuildPool(std::span<const BibRecord> records,
                   const std::vector<TitleGroup> &groups, size_t train_groups,
                   const EntityVocabulary &vocab,
                   const VariantPolicy &policy) {
  EvalPool pool;
  for (size_t g = train_groups; g < groups.size(); ++g) {
    size_t n = 0;
    for (size_t r : groups[g].records) {
      if (InVocabularyAuthors(records[r], vocab) < 2) continue;
      n += GeneratePairSamples(records[r], policy, vocab).size();
    }
    if (n == 0) continue;
    pool.groups.push_back(g);
    pool.samples.push_back(n);
    pool.total += n;
  }
  return pool;
}

size_t TrainSamples(const std::vector<TitleGroup> &groups, size_t n) {
  size_t total = 0;
  for (size_t g = 0; g < n; ++g) total += groups[g].raw_samples;
  return total;
}

}  // namespace

DatasetSplit BuildSplit(std::span<const BibRecord> records,
                        const SplitFractions &fractions, uint64_t seed,
                        const VariantPolicy &policy) {
  if (!(fractions.train > 0 && fractions.validation > 0 && fractions.test > 0) ||
      std::abs(fractions.train + fractions.validation + fractions.test - 1.0) >
          1e-9) {
    throw ConfigError("split fractions must be positive and sum to 1");
  }
  if (records.empty()) throw Error("degenerate split");

  std::vector<TitleGroup> groups;
  {
    std::unordered_map<std::string, size_t> by_title;
    for (size_t i = 0; i < records.size(); ++i) {
      std::string title = CollapseWhitespace(records[i].title);
      auto [it, inserted] = by_title.emplace(title, groups.size());
      if (inserted) groups.emplace_back();
      groups[it->second].records.push_back(i);
      groups[it->second].raw_samples += CountPairSamples(records[i], policy);
    }
  }
  Rng rng(seed);
  rng.Shuffle(std::span<TitleGroup>(groups));

  size_t total_raw = 0;
  for (const TitleGroup &g : groups) total_raw += g.raw_samples;
  const double eval_ratio =
      (fractions.validation + fractions.test) / fractions.train;

  // Smallest training prefix reaching the train fraction of all samples.
  size_t upper = 0;
  for (size_t acc = 0; upper < groups.size();) {
    acc += groups[upper].raw_samples;
    ++upper;
    if (static_cast<double>(acc) >= fractions.train * total_raw) break;
  }
  upper = std::min(upper, groups.size() > 1 ? groups.size() - 1 : size_t{1});

  // Largest prefix whose leftover records can still fill validation and
  // test at the requested ratio.
  auto feasible = [&](size_t n) {
    EntityVocabulary vocab = TrainVocabulary(records, groups, n);
    EvalPool pool = BuildPool(records, groups, n, vocab, policy);
    return static_cast<double>(pool.total) >=
           eval_ratio * static_cast<double>(TrainSamples(groups, n));
  };
  size_t train_groups = upper;
  if (!feasible(upper)) {
    size_t lo = 1, hi = upper;  // invariant: hi infeasible
    size_t best = 0;
    while (lo < hi) {
      size_t mid = lo + (hi - lo) / 2;
      if (feasible(mid)) {
        best = mid;
        lo = mid + 1;
      } else {
        hi = mid;
      }
    }
    train_groups = best > 0 ? best : upper;
  }

  DatasetSplit split;
  split.vocabulary = TrainVocabulary(records, groups, train_groups);
  const EntityVocabulary &vocab = split.vocabulary;
  for (size_t g = 0; g < train_groups; ++g) {
    for (size_t r : groups[g].records) {
      auto s = GeneratePairSamples(records[r], policy, vocab);
      split.train.insert(split.train.end(), std::make_move_iterator(s.begin()),
                         std::make_move_iterator(s.end()));
      ++split.stats.train_records;
    }
  }

  const double train_n = static_cast<double>(split.train.size());
  const double target_val = train_n * fractions.validation / fractions.train;
  const double target_test = train_n * fractions.test / fractions.train;
  EvalPool pool = BuildPool(records, groups, train_groups, vocab, policy);
  std::vector<int> assignment(groups.size(), -1);  // 1 = val, 2 = test
  double val_n = 0, test_n = 0;
  for (size_t i = 0; i < pool.groups.size(); ++i) {
    const double c = static_cast<double>(pool.samples[i]);
    const double val_deficit = target_val - val_n;
    const double test_deficit = target_test - test_n;
    // Adding c moves a split closer to its target iff c < 2 * deficit.
    const bool val_first = val_deficit >= test_deficit;
    const double first_deficit = val_first ? val_deficit : test_deficit;
    const double second_deficit = val_first ? test_deficit : val_deficit;
    int choice = 0;
    if (c < 2 * first_deficit) {
      choice = val_first ? 1 : 2;
    } else if (c < 2 * second_deficit) {
      choice = val_first ? 2 : 1;
    }
    if (choice == 1) val_n += c;
    if (choice == 2) test_n += c;
    assignment[pool.groups[i]] = choice;
  }

  for (size_t g = train_groups; g < groups.size(); ++g) {
    for (size_t r : groups[g].records) {
      const int choice = assignment[g];
      if (choice <= 0 || InVocabularyAuthors(records[r], vocab) < 2) {
        ++split.stats.unused_records;
        continue;
      }
      auto s = GeneratePairSamples(records[r], policy, vocab);
      auto &dest = choice == 1 ? split.validation : split.test;
      dest.insert(dest.end(), std::make_move_iterator(s.begin()),
                  std::make_move_iterator(s.end()));
      ++(choice == 1 ? split.stats.validation_records
                     : split.stats.test_records);
    }
  }

  if (split.train.empty() || split.validation.empty() || split.test.empty()) {
    throw Error("degenerate split");
  }

  std::set<std::string> train_titles, val_titles;
  for (const auto &s : split.train) train_titles.insert(CollapseWhitespace(s.title));
  for (const auto &s : split.validation) {
    val_titles.insert(CollapseWhitespace(s.title));
    if (train_titles.count(CollapseWhitespace(s.title))) {
      throw Error("title shared between train and validation: " + s.title);
    }
  }
  for (const auto &s : split.test) {
    std::string t = CollapseWhitespace(s.title);
    if (train_titles.count(t) || val_titles.count(t)) {
      throw Error("title shared between test and another split: " + s.title);
    }
  }

  const double total = static_cast<double>(
      split.train.size() + split.validation.size() + split.test.size());
  split.stats.train_fraction = split.train.size() / total;
  split.stats.validation_fraction = split.validation.size() / total;
  split.stats.test_fraction = split.test.size() / total;
  return split;
}

std::string SampleToJsonLine(const TrainingSample &sample) {
  json j;
  j["record_key"] = sample.record_key;
  j["label"] = sample.label;
  j["target_entity"] = sample.target_entity;
  j["coauthor_entity"] = sample.coauthor_entity;
  j["author"] = {{"style", VariantStyleName(sample.author_variant.style)},
                 {"text", sample.author_variant.rendered}};
  j["coauthor"] = {{"style", VariantStyleName(sample.coauthor_variant.style)},
                   {"text", sample.coauthor_variant.rendered}};
  j["title"] = sample.title;
  j["source"] = sample.source;
  return j.dump();
}

namespace {

NameVariant VariantFromJson(const json &j) {
  auto style = ParseVariantStyle(j.at("style").get<std::string>());
  if (!style) throw Error("unknown variant style " + j.at("style").dump());
  return NameVariant{*style, j.at("text").get<std::string>()};
}

}  // namespace

TrainingSample SampleFromJsonLine(std::string_view line) {
  TrainingSample s;
  try {
    json j = json::parse(line);
    s.record_key = j.at("record_key").get<std::string>();
    s.label = j.at("label").get<int>();
    s.target_entity = j.at("target_entity").get<std::string>();
    s.coauthor_entity = j.at("coauthor_entity").get<std::string>();
    s.author_variant = VariantFromJson(j.at("author"));
    s.coauthor_variant = VariantFromJson(j.at("coauthor"));
    s.title = j.at("title").get<std::string>();
    s.source = j.at("source").get<std::string>();
  } catch (const json::exception &e) {
    throw Error(std::string("malformed sample line: ") + e.what());
  }
  return s;
}

void WriteSamples(std::ostream &out, std::span<const TrainingSample> samples) {
  for (const TrainingSample &s : samples) out << SampleToJsonLine(s) << '\n';
}

std::vector<TrainingSample> ReadSamples(std::istream &in) {
  std::vector<TrainingSample> samples;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      samples.push_back(SampleFromJsonLine(line));
    } catch (const Error &e) {
      throw Error("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return samples;
}

void WriteVocabulary(std::ostream &out, const EntityVocabulary &vocab) {
  for (const std::string &id : vocab.ids()) out << id << '\n';
}

EntityVocabulary ReadVocabulary(std::istream &in) {
  std::vector<std::string> ids;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ids.push_back(line);
  }
  return EntityVocabulary::FromOrderedIds(std::move(ids));
}

namespace {

namespace fs = std::filesystem;

void WriteSampleFile(const fs::path &path,
                     std::span<const TrainingSample> samples) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  WriteSamples(out, samples);
  if (!out) throw Error("write failed: " + path.string());
}

std::vector<TrainingSample> ReadSampleFile(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return ReadSamples(in);
  } catch (const Error &e) {
    throw Error(path.string() + ": " + e.what());
  }
}

std::string HexFingerprint(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

void WriteSplitDir(const std::string &dir, const DatasetSplit &split) {
  fs::create_directories(dir);
  const fs::path root(dir);
  WriteSampleFile(root / "train.jsonl", split.train);
  WriteSampleFile(root / "validation.jsonl", split.validation);
  WriteSampleFile(root / "test.jsonl", split.test);
  {
    std::ofstream out(root / "vocabulary.txt", std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write vocabulary in " + dir);
    WriteVocabulary(out, split.vocabulary);
  }
  json manifest;
  manifest["vocabulary_size"] = split.vocabulary.size();
  manifest["vocabulary_fingerprint"] = HexFingerprint(split.vocabulary.Fingerprint());
  manifest["samples"] = {{"train", split.train.size()},
                         {"validation", split.validation.size()},
                         {"test", split.test.size()}};
  manifest["records"] = {{"train", split.stats.train_records},
                         {"validation", split.stats.validation_records},
                         {"test", split.stats.test_records},
                         {"unused", split.stats.unused_records}};
  manifest["fractions"] = {{"train", split.stats.train_fraction},
                           {"validation", split.stats.validation_fraction},
                           {"test", split.stats.test_fraction}};
  std::ofstream out(root / "manifest.json", std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write manifest in " + dir);
  out << manifest.dump(2) << '\n';
}

DatasetSplit ReadSplitDir(const std::string &dir) {
  const fs::path root(dir);
  DatasetSplit split;
  {
    std::ifstream in(root / "vocabulary.txt", std::ios::binary);
    if (!in) throw Error("cannot open " + (root / "vocabulary.txt").string());
    split.vocabulary = ReadVocabulary(in);
  }
  json manifest;
  {
    std::ifstream in(root / "manifest.json", std::ios::binary);
    if (!in) throw Error("cannot open " + (root / "manifest.json").string());
    try {
      manifest = json::parse(in);
    } catch (const json::exception &e) {
      throw Error("malformed split manifest: " + std::string(e.what()));
    }
  }
  const std::string expected = manifest.value("vocabulary_fingerprint", "");
  if (expected != HexFingerprint(split.vocabulary.Fingerprint())) {
    throw ConfigError("split vocabulary does not match its manifest "
                      "fingerprint in " + dir);
  }
  split.train = ReadSampleFile(root / "train.jsonl");
  split.validation = ReadSampleFile(root / "validation.jsonl");
  split.test = ReadSampleFile(root / "test.jsonl");
  const int k = split.vocabulary.size();
  for (auto *part : {&split.train, &split.validation, &split.test}) {
    for (const TrainingSample &s : *part) {
      if (s.label < 0 || s.label >= k ||
          split.vocabulary.IdAt(s.label) != s.target_entity) {
        throw ConfigError("sample label " + std::to_string(s.label) +
                          " does not match the split vocabulary");
      }
    }
  }
  if (manifest.contains("records")) {
    const json &r = manifest["records"];
    split.stats.train_records = r.value("train", size_t{0});
    split.stats.validation_records = r.value("validation", size_t{0});
    split.stats.test_records = r.value("test", size_t{0});
    split.stats.unused_records = r.value("unused", size_t{0});
  }
  const double total = static_cast<double>(
      split.train.size() + split.validation.size() + split.test.size());
  if (total > 0) {
    split.stats.train_fraction = split.train.size() / total;
    split.stats.validation_fraction = split.validation.size() / total;
    split.stats.test_fraction = split.test.size() / total;
  }
  return split;
}

}  // namespace bib2auth
