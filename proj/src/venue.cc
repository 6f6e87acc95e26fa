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

#include "bib2auth/venue.h"

#include <filesystem>
#include <fstream>
#include <mutex>

#include "httplib.h"
#include "json.hpp"

namespace bib2auth {

using json = nlohmann::ordered_json;

void VenueCache::Load() {
  std::unique_lock lock(mu_);
  if (path_.empty() || !std::filesystem::exists(path_)) return;
  std::ifstream in(path_, std::ios::binary);
  if (!in) throw Error("cannot open venue cache " + path_);
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      json j = json::parse(line);
      entries_[j.at("abbrev").get<std::string>()] =
          VenueCacheEntry{j.at("expansion").get<std::string>(),
                          j.at("negative").get<bool>()};
    } catch (const json::exception &e) {
      throw Error(path_ + ":" + std::to_string(line_no) +
                  ": bad venue cache line: " + e.what());
    }
  }
  dirty_ = false;
}

void VenueCache::Save() {
  std::unique_lock lock(mu_);
  if (!dirty_ || path_.empty()) return;
  std::ofstream out(path_, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write venue cache " + path_);
  for (const auto &[abbrev, entry] : entries_) {
    json j;
    j["abbrev"] = abbrev;
    j["expansion"] = entry.expansion;
    j["negative"] = entry.negative;
    out << j.dump() << '\n';
  }
  if (!out) throw Error("write failed: " + path_);
  dirty_ = false;
}

std::optional<VenueCacheEntry> VenueCache::Find(
    const std::string &abbrev) const {
  std::shared_lock lock(mu_);
  auto it = entries_.find(abbrev);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void VenueCache::Insert(const std::string &abbrev, VenueCacheEntry entry) {
  std::unique_lock lock(mu_);
  entries_[abbrev] = std::move(entry);
  dirty_ = true;
}

size_t VenueCache::size() const {
  std::shared_lock lock(mu_);
  return entries_.size();
}

bool VenueCache::dirty() const {
  std::shared_lock lock(mu_);
  return dirty_;
}

std::map<std::string, VenueCacheEntry> VenueCache::entries() const {
  std::shared_lock lock(mu_);
  return entries_;
}

UrlParts SplitUrl(const std::string &url) {
  auto scheme = url.find("://");
  if (scheme == std::string::npos) {
    throw ConfigError("URL lacks a scheme: " + url);
  }
  auto slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

std::optional<std::string> ParseVenueResponse(const std::string &body) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::exception &e) {
    throw VenueLookupError(std::string("unparseable venue response: ") +
                           e.what());
  }
  const json *hits = nullptr;
  if (j.contains("result") && j["result"].contains("hits")) {
    hits = &j["result"]["hits"];
  }
  if (!hits || !hits->contains("hit")) return std::nullopt;
  const json &hit = (*hits)["hit"];
  const json *first = nullptr;
  if (hit.is_array()) {
    if (hit.empty()) return std::nullopt;
    first = &hit[0];
  } else if (hit.is_object()) {
    first = &hit;
  }
  if (!first || !first->contains("info")) return std::nullopt;
  const json &info = (*first)["info"];
  if (!info.contains("venue") || !info["venue"].is_string()) {
    return std::nullopt;
  }
  std::string venue = info["venue"].get<std::string>();
  if (venue.empty()) return std::nullopt;
  return venue;
}

HttpVenueClient::HttpVenueClient(VenueClientConfig config)
    : config_(std::move(config)) {
  SplitUrl(config_.base_url);
}

std::optional<std::string> HttpVenueClient::Lookup(const std::string &abbrev) {
  UrlParts url = SplitUrl(config_.base_url);
  httplib::Client client(url.origin);
  auto timeout = std::chrono::duration<double>(config_.timeout_seconds);
  client.set_connection_timeout(
      std::chrono::duration_cast<std::chrono::microseconds>(timeout));
  client.set_read_timeout(
      std::chrono::duration_cast<std::chrono::microseconds>(timeout));
  httplib::Params params{{"q", abbrev}, {"format", "json"}, {"h", "1"}};
  std::string last_error;
  for (int attempt = 0; attempt <= config_.retries; ++attempt) {
    auto res = client.Get(url.path, params, httplib::Headers{});
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status != 200) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    return ParseVenueResponse(res->body);
  }
  throw VenueLookupError("venue lookup for '" + abbrev + "' failed after " +
                         std::to_string(config_.retries + 1) +
                         " attempts: " + last_error);
}

std::string ExpandVenue(const std::string &abbrev, VenueCache &cache,
                        VenueClient &client, const WarningSink &warn) {
  if (abbrev.empty()) throw Error("empty venue abbreviation");
  if (auto hit = cache.Find(abbrev)) return hit->expansion;
  std::optional<std::string> expansion;
  try {
    expansion = client.Lookup(abbrev);
  } catch (const VenueLookupError &e) {
    if (warn) warn(e.what());
    return abbrev;
  }
  if (!expansion) {
    cache.Insert(abbrev, VenueCacheEntry{abbrev, true});
    return abbrev;
  }
  cache.Insert(abbrev, VenueCacheEntry{*expansion, false});
  return *expansion;
}

}  // namespace bib2auth
