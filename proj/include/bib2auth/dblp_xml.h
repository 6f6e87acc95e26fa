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

#ifndef BIB2AUTH_DBLP_XML_H_
#define BIB2AUTH_DBLP_XML_H_

#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "bib2auth/core.h"

namespace bib2auth {

// Malformed XML. byte_offset is the zero-based offset of the offending byte.
class XmlParseError : public Error {
 public:
  XmlParseError(const std::string &message, uint64_t byte_offset);
  uint64_t byte_offset() const { return byte_offset_; }

 private:
  uint64_t byte_offset_;
};

struct IngestStats {
  uint64_t ingested = 0;
  std::map<std::string, uint64_t> ingested_by_kind;
  // Publication elements of kinds other than article/inproceedings.
  std::map<std::string, uint64_t> skipped_by_kind;
  // article/inproceedings elements lacking a title or authors.
  uint64_t skipped_invalid = 0;
  // First few skip reasons, for logging.
  std::vector<std::string> warnings;

  uint64_t skipped_total() const;
};

// Pull parser over a DBLP-style dump. Memory use is bounded by the buffer
// size plus the size of the largest single record; the input is never held
// in full.
class DblpXmlReader {
 public:
  static constexpr size_t kDefaultBufferSize = 64 * 1024;
  // Per-record text cap; a record larger than this is treated as malformed.
  static constexpr size_t kMaxRecordBytes = 1 << 20;

  explicit DblpXmlReader(std::istream &in,
                         size_t buffer_size = kDefaultBufferSize);
  ~DblpXmlReader();
  DblpXmlReader(const DblpXmlReader &) = delete;
  DblpXmlReader &operator=(const DblpXmlReader &) = delete;

  // Next article/inproceedings record in document order, or false at the
  // end of the document. Throws XmlParseError.
  bool Next(BibRecord *record);

  const IngestStats &stats() const;

 private:
  class Impl;
  std::unique_ptr<Impl> impl_;
};

// Streams every record through sink and returns the ingest statistics.
IngestStats ParseDblpXml(std::istream &in,
                         const std::function<void(BibRecord &&)> &sink);

// Convenience wrapper that collects the records.
std::vector<BibRecord> ParseDblpXml(std::istream &in,
                                    IngestStats *stats = nullptr);

}  // namespace bib2auth

#endif  // BIB2AUTH_DBLP_XML_H_
