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

#include "bib2auth/dblp_xml.h"

#include <algorithm>
#include <cstring>
#include <string_view>
#include <unordered_map>

#include "bib2auth/text.h"

namespace bib2auth {

namespace {

constexpr size_t kMaxDepth = 64;
constexpr size_t kMaxNameLength = 256;
constexpr size_t kMaxWarnings = 100;

// Named entities accepted in addition to the five predefined XML ones. The
// dump's DTD declares the ISO Latin-1 set; these are its names in code point
// order starting at U+00A0.
constexpr const char *kLatin1EntityNames[96] = {
    "nbsp",   "iexcl",  "cent",   "pound",  "curren", "yen",    "brvbar",
    "sect",   "uml",    "copy",   "ordf",   "laquo",  "not",    "shy",
    "reg",    "macr",   "deg",    "plusmn", "sup2",   "sup3",   "acute",
    "micro",  "para",   "middot", "cedil",  "sup1",   "ordm",   "raquo",
    "frac14", "frac12", "frac34", "iquest", "Agrave", "Aacute", "Acirc",
    "Atilde", "Auml",   "Aring",  "AElig",  "Ccedil", "Egrave", "Eacute",
    "Ecirc",  "Euml",   "Igrave", "Iacute", "Icirc",  "Iuml",   "ETH",
    "Ntilde", "Ograve", "Oacute", "Ocirc",  "Otilde", "Ouml",   "times",
    "Oslash", "Ugrave", "Uacute", "Ucirc",  "Uuml",   "Yacute", "THORN",
    "szlig",  "agrave", "aacute", "acirc",  "atilde", "auml",   "aring",
    "aelig",  "ccedil", "egrave", "eacute", "ecirc",  "euml",   "igrave",
    "iacute", "icirc",  "iuml",   "eth",    "ntilde", "ograve", "oacute",
    "ocirc",  "otilde", "ouml",   "divide", "oslash", "ugrave", "uacute",
    "ucirc",  "uuml",   "yacute", "thorn",  "yuml"};

const std::unordered_map<std::string_view, char32_t> &EntityTable() {
  static const auto *table = [] {
    auto *t = new std::unordered_map<std::string_view, char32_t>{
        {"lt", '<'}, {"gt", '>'}, {"amp", '&'}, {"quot", '"'}, {"apos", '\''}};
    for (int i = 0; i < 96; ++i) {
      t->emplace(kLatin1EntityNames[i], static_cast<char32_t>(0xA0 + i));
    }
    return t;
  }();
  return *table;
}

bool IsNameChar(int c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '-' || c == '_' || c == ':' ||
         c == '.' || c >= 0x80;
}

bool IsSpace(int c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

// Buffered byte source that tracks the absolute offset.
class Source {
 public:
  Source(std::istream &in, size_t buffer_size)
      : in_(in), buf_(std::max<size_t>(buffer_size, 64)) {}

  int Peek() {
    if (pos_ == len_ && !Fill(1)) return -1;
    return static_cast<unsigned char>(buf_[pos_]);
  }

  int Get() {
    int c = Peek();
    if (c >= 0) ++pos_;
    return c;
  }

  bool LookingAt(std::string_view s) {
    if (len_ - pos_ < s.size() && !Fill(s.size())) return false;
    return std::memcmp(buf_.data() + pos_, s.data(), s.size()) == 0;
  }

  void Skip(size_t n) { pos_ += n; }

  uint64_t offset() const { return base_ + pos_; }

 private:
  // Ensures at least n unread bytes if the stream has them.
  bool Fill(size_t n) {
    if (pos_ > 0) {
      std::memmove(buf_.data(), buf_.data() + pos_, len_ - pos_);
      base_ += pos_;
      len_ -= pos_;
      pos_ = 0;
    }
    while (len_ < n && in_) {
      in_.read(buf_.data() + len_, static_cast<std::streamsize>(buf_.size() - len_));
      len_ += static_cast<size_t>(in_.gcount());
      if (in_.gcount() == 0) break;
    }
    return len_ >= n;
  }

  std::istream &in_;
  std::vector<char> buf_;
  size_t pos_ = 0;
  size_t len_ = 0;
  uint64_t base_ = 0;
};

}  // namespace

XmlParseError::XmlParseError(const std::string &message, uint64_t byte_offset)
    : Error("XML error at byte " + std::to_string(byte_offset) + ": " +
            message),
      byte_offset_(byte_offset) {}

uint64_t IngestStats::skipped_total() const {
  uint64_t total = skipped_invalid;
  for (const auto &[kind, count] : skipped_by_kind) total += count;
  return total;
}

class DblpXmlReader::Impl {
 public:
  Impl(std::istream &in, size_t buffer_size) : src_(in, buffer_size) {}

  bool Next(BibRecord *record) {
    while (true) {
      int c = src_.Peek();
      if (c < 0) {
        if (!stack_.empty()) {
          Fail("unexpected end of document inside <" + stack_.back() + ">");
        }
        if (!root_seen_) Fail("document has no root element");
        return false;
      }
      if (c == '<') {
        if (ParseMarkup(record)) return true;
      } else {
        ParseText();
      }
    }
  }

  const IngestStats &stats() const { return stats_; }

 private:
  [[noreturn]] void Fail(const std::string &message) {
    throw XmlParseError(message, src_.offset());
  }

  [[noreturn]] void FailAt(const std::string &message, uint64_t offset) {
    throw XmlParseError(message, offset);
  }

  bool Collecting() const {
    return in_publication_ && stack_.size() >= 3 && !field_.empty();
  }

  void AppendText(std::string_view text) {
    if (!Collecting()) {
      if (stack_.empty() &&
          !std::all_of(text.begin(), text.end(), [](char ch) {
            return IsSpace(static_cast<unsigned char>(ch));
          })) {
        Fail("text outside the root element");
      }
      return;
    }
    record_bytes_ += text.size();
    if (record_bytes_ > kMaxRecordBytes) {
      Fail("record " + key_ + " exceeds " + std::to_string(kMaxRecordBytes) +
           " bytes");
    }
    field_text_.append(text);
  }

  // Reads character data up to the next '<', resolving references.
  void ParseText() {
    std::string chunk;
    while (true) {
      int c = src_.Peek();
      if (c < 0 || c == '<') break;
      if (c == '&') {
        ParseReference(&chunk);
      } else {
        chunk.push_back(static_cast<char>(src_.Get()));
      }
      if (chunk.size() >= 4096) {
        AppendText(chunk);
        chunk.clear();
      }
    }
    AppendText(chunk);
  }

  void ParseReference(std::string *out) {
    uint64_t start = src_.offset();
    src_.Get();  // '&'
    std::string name;
    while (true) {
      int c = src_.Get();
      if (c < 0) FailAt("unterminated entity reference", start);
      if (c == ';') break;
      if (name.size() > 32 || IsSpace(c) || c == '<' || c == '&') {
        FailAt("unterminated entity reference", start);
      }
      name.push_back(static_cast<char>(c));
    }
    if (name.empty()) FailAt("empty entity reference", start);
    if (name[0] == '#') {
      char32_t cp = 0;
      bool hex = name.size() > 1 && (name[1] == 'x' || name[1] == 'X');
      size_t i = hex ? 2 : 1;
      if (i == name.size()) FailAt("bad character reference &" + name + ";", start);
      for (; i < name.size(); ++i) {
        char ch = name[i];
        int digit;
        if (ch >= '0' && ch <= '9') {
          digit = ch - '0';
        } else if (hex && ch >= 'a' && ch <= 'f') {
          digit = ch - 'a' + 10;
        } else if (hex && ch >= 'A' && ch <= 'F') {
          digit = ch - 'A' + 10;
        } else {
          FailAt("bad character reference &" + name + ";", start);
        }
        cp = cp * (hex ? 16 : 10) + digit;
        if (cp > 0x10FFFF) FailAt("character reference out of range", start);
      }
      AppendUtf8(cp, out);
      return;
    }
    const auto &table = EntityTable();
    auto it = table.find(name);
    if (it == table.end()) FailAt("unknown entity &" + name + ";", start);
    AppendUtf8(it->second, out);
  }

  std::string ParseName() {
    std::string name;
    while (IsNameChar(src_.Peek())) {
      name.push_back(static_cast<char>(src_.Get()));
      if (name.size() > kMaxNameLength) Fail("name too long");
    }
    if (name.empty()) Fail("expected a name");
    return name;
  }

  void SkipSpace() {
    while (IsSpace(src_.Peek())) src_.Get();
  }

  void SkipUntil(std::string_view terminator, const char *what) {
    uint64_t start = src_.offset();
    while (!src_.LookingAt(terminator)) {
      if (src_.Get() < 0) FailAt(std::string("unterminated ") + what, start);
    }
    src_.Skip(terminator.size());
  }

  void SkipDoctype() {
    uint64_t start = src_.offset();
    int brackets = 0;
    char quote = 0;
    while (true) {
      int c = src_.Get();
      if (c < 0) FailAt("unterminated DOCTYPE", start);
      if (quote) {
        if (c == quote) quote = 0;
      } else if (c == '"' || c == '\'') {
        quote = static_cast<char>(c);
      } else if (c == '[') {
        ++brackets;
      } else if (c == ']') {
        --brackets;
      } else if (c == '>' && brackets <= 0) {
        return;
      }
    }
  }

  // Returns true when a complete record was stored into *record.
  bool ParseMarkup(BibRecord *record) {
    uint64_t start = src_.offset();
    if (src_.LookingAt("<?")) {
      src_.Skip(2);
      SkipUntil("?>", "processing instruction");
      return false;
    }
    if (src_.LookingAt("<!--")) {
      src_.Skip(4);
      SkipUntil("-->", "comment");
      return false;
    }
    if (src_.LookingAt("<![CDATA[")) {
      src_.Skip(9);
      std::string text;
      while (!src_.LookingAt("]]>")) {
        int c = src_.Get();
        if (c < 0) FailAt("unterminated CDATA section", start);
        text.push_back(static_cast<char>(c));
      }
      src_.Skip(3);
      if (stack_.empty()) FailAt("CDATA outside the root element", start);
      AppendText(text);
      return false;
    }
    if (src_.LookingAt("<!")) {
      if (root_seen_) FailAt("markup declaration inside the document", start);
      src_.Skip(2);
      SkipDoctype();
      return false;
    }
    if (src_.LookingAt("</")) {
      src_.Skip(2);
      std::string name = ParseName();
      SkipSpace();
      if (src_.Get() != '>') FailAt("malformed end tag </" + name, start);
      if (stack_.empty() || stack_.back() != name) {
        FailAt("mismatched end tag </" + name + ">" +
                   (stack_.empty() ? "" : " (expected </" + stack_.back() + ">)"),
               start);
      }
      return EndElement(record);
    }
    src_.Skip(1);
    std::string name = ParseName();
    std::string key;
    bool self_closing = false;
    while (true) {
      SkipSpace();
      int c = src_.Peek();
      if (c == '>') {
        src_.Get();
        break;
      }
      if (c == '/') {
        src_.Get();
        if (src_.Get() != '>') FailAt("malformed empty-element tag", start);
        self_closing = true;
        break;
      }
      if (c < 0) FailAt("unterminated start tag <" + name, start);
      std::string attr = ParseName();
      SkipSpace();
      if (src_.Get() != '=') FailAt("attribute " + attr + " lacks a value", start);
      SkipSpace();
      int quote = src_.Get();
      if (quote != '"' && quote != '\'') {
        FailAt("attribute " + attr + " value is not quoted", start);
      }
      std::string value;
      while (true) {
        int v = src_.Peek();
        if (v < 0) FailAt("unterminated attribute value", start);
        if (v == quote) {
          src_.Get();
          break;
        }
        if (v == '<') Fail("'<' in attribute value");
        if (v == '&') {
          ParseReference(&value);
        } else {
          value.push_back(static_cast<char>(src_.Get()));
        }
        if (value.size() > kMaxRecordBytes) Fail("attribute value too long");
      }
      if (attr == "key") key = std::move(value);
    }
    StartElement(name, std::move(key), start);
    if (self_closing) return EndElement(record);
    return false;
  }

  void StartElement(const std::string &name, std::string key, uint64_t start) {
    if (stack_.empty()) {
      if (root_seen_) FailAt("more than one root element", start);
      root_seen_ = true;
    }
    if (stack_.size() >= kMaxDepth) FailAt("elements nested too deeply", start);
    if (stack_.size() == 1) {
      in_publication_ = true;
      kind_ = name;
      key_ = std::move(key);
      authors_.clear();
      title_.clear();
      journal_.clear();
      booktitle_.clear();
      year_.clear();
      has_title_ = false;
      record_bytes_ = 0;
    } else if (stack_.size() == 2 && in_publication_) {
      field_ = name;
      field_text_.clear();
    }
    stack_.push_back(name);
  }

  bool EndElement(BibRecord *record) {
    stack_.pop_back();
    if (stack_.size() == 2 && in_publication_) {
      std::string text = CollapseWhitespace(field_text_);
      if (field_ == "author") {
        if (!text.empty()) authors_.push_back(std::move(text));
      } else if (field_ == "title") {
        title_ = std::move(text);
        has_title_ = true;
      } else if (field_ == "journal") {
        journal_ = std::move(text);
      } else if (field_ == "booktitle") {
        booktitle_ = std::move(text);
      } else if (field_ == "year") {
        year_ = std::move(text);
      }
      field_.clear();
      field_text_.clear();
      return false;
    }
    if (stack_.size() == 1 && in_publication_) {
      in_publication_ = false;
      return FinishPublication(record);
    }
    return false;
  }

  void Warn(std::string message) {
    if (stats_.warnings.size() < kMaxWarnings) {
      stats_.warnings.push_back(std::move(message));
    }
  }

  bool FinishPublication(BibRecord *record) {
    RecordKind kind = ParseRecordKind(kind_);
    if (kind == RecordKind::kOther) {
      ++stats_.skipped_by_kind[kind_];
      return false;
    }
    if (authors_.empty() || !has_title_ || title_.empty()) {
      ++stats_.skipped_invalid;
      Warn("skipped " + kind_ + " " + (key_.empty() ? "<no key>" : key_) +
           ": missing " + (authors_.empty() ? "authors" : "title"));
      return false;
    }
    BibRecord r;
    r.key = key_;
    r.kind = kind;
    for (std::string &a : authors_) r.authors.push_back(AuthorRef{a, a});
    r.title = title_;
    r.source = kind == RecordKind::kArticle ? journal_ : booktitle_;
    if (!year_.empty() &&
        std::all_of(year_.begin(), year_.end(),
                    [](char ch) { return ch >= '0' && ch <= '9'; }) &&
        year_.size() <= 6) {
      r.year = std::stoi(year_);
    }
    ++stats_.ingested;
    ++stats_.ingested_by_kind[kind_];
    *record = std::move(r);
    return true;
  }

  Source src_;
  std::vector<std::string> stack_;
  bool root_seen_ = false;
  IngestStats stats_;

  bool in_publication_ = false;
  std::string kind_;
  std::string key_;
  std::string field_;
  std::string field_text_;
  std::vector<std::string> authors_;
  std::string title_;
  std::string journal_;
  std::string booktitle_;
  std::string year_;
  bool has_title_ = false;
  size_t record_bytes_ = 0;
};

DblpXmlReader::DblpXmlReader(std::istream &in, size_t buffer_size)
    : impl_(std::make_unique<Impl>(in, buffer_size)) {}

DblpXmlReader::~DblpXmlReader() = default;

bool DblpXmlReader::Next(BibRecord *record) { return impl_->Next(record); }

const IngestStats &DblpXmlReader::stats() const { return impl_->stats(); }

IngestStats ParseDblpXml(std::istream &in,
                         const std::function<void(BibRecord &&)> &sink) {
  DblpXmlReader reader(in);
  BibRecord record;
  while (reader.Next(&record)) sink(std::move(record));
  return reader.stats();
}

std::vector<BibRecord> ParseDblpXml(std::istream &in, IngestStats *stats) {
  std::vector<BibRecord> records;
  IngestStats s =
      ParseDblpXml(in, [&](BibRecord &&r) { records.push_back(std::move(r)); });
  if (stats) *stats = std::move(s);
  return records;
}

}  // namespace bib2auth
