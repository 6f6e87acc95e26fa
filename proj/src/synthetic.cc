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

#include "bib2auth/synthetic.h"

#include <algorithm>
#include <array>
#include <cstdio>
#include <ostream>
#include <set>
#include <sstream>

#include "bib2auth/random.h"
#include "bib2auth/text.h"

namespace bib2auth {
namespace {

constexpr std::array kFirstNames = {
    "Weihua",  "Christophe", "Abinaya",  "Bing",     "Mariana",  "Olaf",
    "Keiko",   "Tomasz",     "Ingrid",   "Rafael",   "Sunita",   "Henrik",
    "Lucía",   "Dmitri",     "Amara",    "Jörg",     "Fatima",   "Pieter",
    "Yuki",    "Gabriel",    "Nadia",    "Emeka",    "Helena",   "Arjun",
    "Chiara",  "Stefan",     "Mei",      "Kwame",    "Isabel",   "Lars",
    "Priya",   "Mateo",      "Zofia",    "Hassan",   "Elena",    "Tobias",
    "Ayesha",  "Nikolai",    "Camille",  "Raúl",     "Sigrid",   "Omar",
    "Leticia", "Viktor",     "Hana",     "Felipe",   "Ingeborg", "Jamal"};

constexpr std::array kLastNames = {
    "Xiong",     "Ponsard",   "Chandrasekaran", "Li",        "Oliveira",
    "Lindqvist", "Tanaka",    "Kowalski",       "Berg",      "Moreno",
    "Ramdoyal",  "Halvorsen", "Fernández",      "Volkov",    "Okafor",
    "Müller",    "Haddad",    "Janssen",        "Watanabe",  "Costa",
    "Petrova",   "Eze",       "Novak",          "Raman",     "Bianchi",
    "Schneider", "Zhou",      "Mensah",         "Ruiz",      "Nilsson",
    "Iyer",      "Castillo",  "Wójcik",         "Karimi",    "Popescu",
    "Fischer",   "Siddiqui",  "Orlov",          "Dubois",    "Navarro",
    "Eriksen",   "Farouk",    "Almeida",        "Horváth",   "Sato",
    "Vargas",    "Dahl",      "Bakr"};

constexpr std::array kMiddleNames = {"Thulsi", "Maria", "J.", "Van", "Lee",
                                     "Anne"};

struct Topic {
  std::array<const char *, 16> words;
  std::array<const char *, 2> journals;
  std::array<const char *, 2> conferences;
};

constexpr std::array<Topic, 6> kTopics = {{
    {{"visual", "saliency", "image", "segmentation", "tensor", "color",
      "texture", "illumination", "camera", "depth", "pixel", "retinal",
      "contour", "stereo", "optical", "shading"},
     {"IEEE Trans. Image Process.", "Comput. Vis. Image Underst."},
     {"CVPR", "ICIP"}},
    {{"consensus", "protocol", "replication", "byzantine", "distributed",
      "fault", "latency", "cluster", "leader", "quorum", "gossip",
      "partition", "storage", "transaction", "scheduling", "throughput"},
     {"ACM Trans. Comput. Syst.", "Distrib. Comput."},
     {"PODC", "OSDI"}},
    {{"requirements", "goal", "specification", "model", "verification",
      "safety", "formal", "traceability", "stakeholder", "obstacle",
      "refinement", "compliance", "assurance", "elicitation", "domain",
      "engineering"},
     {"Requir. Eng.", "Softw. Syst. Model."},
     {"RE", "REFSQ"}},
    {{"protein", "genome", "sequence", "alignment", "phylogenetic", "gene",
      "expression", "molecular", "folding", "variant", "clinical", "cell",
      "biomarker", "transcription", "pathway", "regulatory"},
     {"Bioinform.", "BMC Bioinform."},
     {"ISMB", "RECOMB"}},
    {{"query", "index", "relational", "database", "join", "optimizer",
      "schema", "warehouse", "column", "compression", "cardinality",
      "tuple", "provenance", "stream", "olap", "sql"},
     {"VLDB J.", "ACM Trans. Database Syst."},
     {"SIGMOD", "ICDE"}},
    {{"robot", "grasping", "locomotion", "manipulation", "trajectory",
      "planning", "sensor", "odometry", "slam", "actuator", "legged",
      "navigation", "control", "swarm", "aerial", "kinematic"},
     {"IEEE Trans. Robotics", "Auton. Robots"},
     {"ICRA", "IROS"}},
}};

constexpr std::array kGlue = {"towards",   "efficient", "robust",
                              "adaptive",  "scalable",  "learning",
                              "analysis",  "framework", "approach",
                              "evaluation"};

std::string Capitalized(std::string word) {
  if (!word.empty() && word[0] >= 'a' && word[0] <= 'z') word[0] -= 32;
  return word;
}

std::string Suffix(int n) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d", n);
  return buf;
}

}  // namespace

std::vector<BibRecord> GenerateSyntheticCorpus(
    const SyntheticCorpusConfig &config) {
  const int singles = config.entities - 2 * config.homonym_pairs;
  const int display_names = config.homonym_pairs + singles;
  if (config.records < 1 || config.communities < 1 || singles < 0 ||
      display_names > static_cast<int>(kFirstNames.size()) ||
      config.communities > static_cast<int>(kTopics.size())) {
    throw ConfigError("unsupported synthetic corpus configuration");
  }
  Rng rng(config.seed);

  std::vector<std::string> names;
  for (int i = 0; i < display_names; ++i) {
    std::string name = kFirstNames[i];
    if (i % 5 == 2) {
      name += ' ';
      name += kMiddleNames[(i / 5) % kMiddleNames.size()];
    }
    name += ' ';
    name += kLastNames[i];
    names.push_back(std::move(name));
  }

  // Members of each community. Homonym twins land in different communities.
  std::vector<std::vector<std::string>> members(config.communities);
  const int half = std::max(1, config.communities / 2);
  for (int p = 0; p < config.homonym_pairs; ++p) {
    members[p % config.communities].push_back(names[p] + " " + Suffix(1));
    members[(p + half) % config.communities].push_back(names[p] + " " +
                                                       Suffix(2));
  }
  for (int s = 0; s < singles; ++s) {
    auto smallest = std::min_element(
        members.begin(), members.end(),
        [](const auto &a, const auto &b) { return a.size() < b.size(); });
    smallest->push_back(names[config.homonym_pairs + s]);
  }
  for (auto &group : members) rng.Shuffle(std::span<std::string>(group));

  std::set<std::string> titles;
  std::vector<BibRecord> records;
  records.reserve(config.records);
  std::vector<int> led(config.communities, 0);
  for (int r = 0; r < config.records; ++r) {
    const int c = r % config.communities;
    const Topic &topic = kTopics[c];
    const auto &group = members[c];
    const int n = static_cast<int>(group.size());

    BibRecord record;
    record.kind = r % 3 == 0 ? RecordKind::kInproceedings : RecordKind::kArticle;
    const int lead = led[c]++ % n;
    const int k = std::min(n, 2 + static_cast<int>(rng.Below(3)));
    std::vector<int> chosen = {lead};
    constexpr std::array kOffsets = {1, -1, 2, -2};
    std::array<int, 4> order = {0, 1, 2, 3};
    rng.Shuffle(std::span<int>(order));
    for (int o : order) {
      if (static_cast<int>(chosen.size()) == k) break;
      const int m = ((lead + kOffsets[o]) % n + n) % n;
      if (std::find(chosen.begin(), chosen.end(), m) == chosen.end()) {
        chosen.push_back(m);
      }
    }
    for (int m : chosen) {
      record.authors.push_back(AuthorRef{group[m], group[m]});
    }
    // Occasional guest from another community.
    if (config.communities > 1 && rng.Below(5) == 0) {
      const int other =
          (c + 1 + static_cast<int>(rng.Below(config.communities - 1))) %
          config.communities;
      const auto &guests = members[other];
      const std::string &guest = guests[rng.Below(guests.size())];
      record.authors.push_back(AuthorRef{guest, guest});
    }

    std::string title;
    do {
      const int words = 4 + static_cast<int>(rng.Below(3));
      title = Capitalized(kGlue[rng.Below(kGlue.size())]);
      for (int w = 0; w < words; ++w) {
        // Roughly one word in eight is borrowed from another topic.
        const Topic &from =
            rng.Below(8) == 0 ? kTopics[rng.Below(config.communities)] : topic;
        title += ' ';
        title += from.words[rng.Below(from.words.size())];
      }
      title += '.';
    } while (!titles.insert(title).second);
    record.title = title;

    const bool article = record.kind == RecordKind::kArticle;
    record.source = article ? topic.journals[rng.Below(2)]
                            : topic.conferences[rng.Below(2)];
    record.year = 2000 + static_cast<int>(rng.Below(21));
    const std::string prefix = article ? "journals/syn" : "conf/syn";
    record.key = prefix + std::to_string(c) + "/R" + Suffix(r);
    records.push_back(std::move(record));
  }
  return records;
}

std::string EscapeXml(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t cp : DecodeUtf8(text)) {
    switch (cp) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default:
        if (cp < 0x80) {
          out += static_cast<char>(cp);
        } else {
          out += "&#" + std::to_string(static_cast<uint32_t>(cp)) + ";";
        }
    }
  }
  return out;
}

namespace {

void WriteRecord(std::ostream &out, const BibRecord &record) {
  const bool article = record.kind != RecordKind::kInproceedings;
  const char *tag = article ? "article" : "inproceedings";
  out << '<' << tag << " key=\"" << EscapeXml(record.key) << "\">";
  for (const AuthorRef &a : record.authors) {
    out << "<author>" << EscapeXml(a.entity_id) << "</author>";
  }
  out << "<title>" << EscapeXml(record.title) << "</title>";
  if (!record.source.empty()) {
    const char *field = article ? "journal" : "booktitle";
    out << '<' << field << '>' << EscapeXml(record.source) << "</" << field
        << '>';
  }
  if (record.year) out << "<year>" << *record.year << "</year>";
  out << "</" << tag << ">\n";
}

}  // namespace

void WriteDblpXml(std::ostream &out, std::span<const BibRecord> records) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<!DOCTYPE dblp SYSTEM \"dblp.dtd\">\n<dblp>\n";
  for (const BibRecord &record : records) WriteRecord(out, record);
  out << "</dblp>\n";
}

size_t WriteLargeDblpXml(std::ostream &out, size_t target_bytes) {
  SyntheticCorpusConfig config;
  config.records = 60;
  std::vector<BibRecord> base = GenerateSyntheticCorpus(config);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<!DOCTYPE dblp SYSTEM \"dblp.dtd\">\n<dblp>\n";
  size_t written = 0;
  size_t count = 0;
  while (written < target_bytes) {
    BibRecord record = base[count % base.size()];
    record.key += "/" + std::to_string(count);
    std::ostringstream chunk;
    WriteRecord(chunk, record);
    if (count % 7 == 3) {
      chunk << "<www key=\"homepages/" << count
            << "\"><author>Home Page</author><title>Home Page</title></www>\n";
    }
    const std::string text = chunk.str();
    out << text;
    written += text.size();
    ++count;
  }
  out << "</dblp>\n";
  return count;
}

}  // namespace bib2auth
