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

#ifndef BIB2AUTH_VENUE_H_
#define BIB2AUTH_VENUE_H_

#include <functional>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>

#include "bib2auth/core.h"

namespace bib2auth {

// Transport or protocol failure while talking to the venue service.
class VenueLookupError : public Error {
 public:
  using Error::Error;
};

struct VenueCacheEntry {
  std::string expansion;
  // True when the service had no match; expansion then equals the abbrev.
  bool negative = false;

  bool operator==(const VenueCacheEntry &) const = default;
};

// Abbreviation -> expanded venue name, persisted as JSON lines
// {"abbrev", "expansion", "negative"}. Many readers, one writer at a time.
class VenueCache {
 public:
  VenueCache() = default;
  explicit VenueCache(std::string path) : path_(std::move(path)) {}

  // Loads path() if the file exists. Throws on malformed lines.
  void Load();
  // Writes path() when dirty. Entries are written in abbreviation order.
  void Save();

  std::optional<VenueCacheEntry> Find(const std::string &abbrev) const;
  void Insert(const std::string &abbrev, VenueCacheEntry entry);

  size_t size() const;
  bool dirty() const;
  const std::string &path() const { return path_; }
  std::map<std::string, VenueCacheEntry> entries() const;

 private:
  std::string path_;
  mutable std::shared_mutex mu_;
  std::map<std::string, VenueCacheEntry> entries_;
  bool dirty_ = false;
};

class VenueClient {
 public:
  virtual ~VenueClient() = default;
  // Expanded name of the first hit, or nullopt when the service has none.
  // Throws VenueLookupError on failure.
  virtual std::optional<std::string> Lookup(const std::string &abbrev) = 0;
};

struct VenueClientConfig {
  std::string base_url = "https://dblp.org/search/venue/api";
  double timeout_seconds = 10.0;
  int retries = 2;
};

// Queries <base_url>?q=<abbrev>&format=json&h=1 and reads
// result.hits.hit[0].info.venue.
class HttpVenueClient : public VenueClient {
 public:
  explicit HttpVenueClient(VenueClientConfig config);
  std::optional<std::string> Lookup(const std::string &abbrev) override;

 private:
  VenueClientConfig config_;
};

// Extracts the first hit's venue name from a venue-search JSON response.
std::optional<std::string> ParseVenueResponse(const std::string &body);

using WarningSink = std::function<void(const std::string &)>;

// Cache-first expansion. Misses are negative-cached; client failures fall
// back to the abbreviation without caching and report through warn.
std::string ExpandVenue(const std::string &abbrev, VenueCache &cache,
                        VenueClient &client, const WarningSink &warn = {});

// Splits "scheme://host[:port]/path" into the origin and the path.
struct UrlParts {
  std::string origin;
  std::string path;
};
UrlParts SplitUrl(const std::string &url);

}  // namespace bib2auth

#endif  // BIB2AUTH_VENUE_H_
