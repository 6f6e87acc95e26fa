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

#include <chrono>
#include <cmath>

#include "bib2auth/embeddings.h"
#include "bib2auth/venue.h"
#include "httplib.h"
#include "json.hpp"

namespace bib2auth {

using json = nlohmann::json;

std::vector<EmbeddingVector> RemoteEmbed(std::span<const std::string> batch,
                                         std::string_view kind,
                                         const EmbedderConfig &cfg) {
  if (batch.empty()) throw Error("remote embedding batch is empty");
  if (kind != "name" && kind != "content") {
    throw Error("embedding kind must be 'name' or 'content'");
  }
  const int expected_dim = kind == "name" ? cfg.name_dim : cfg.content_dim;
  UrlParts url = SplitUrl(cfg.remote_url);
  std::string path = url.path;
  if (path.empty() || path.back() != '/') path.push_back('/');
  path += "embed";

  json request;
  request["kind"] = kind;
  request["texts"] = json::array();
  for (const std::string &t : batch) request["texts"].push_back(t);
  const std::string body = request.dump();

  httplib::Client client(url.origin);
  auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(
      std::chrono::duration<double>(cfg.remote_timeout_seconds));
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);

  std::string last_error;
  httplib::Result res;
  for (int attempt = 0; attempt <= cfg.remote_retries; ++attempt) {
    res = client.Post(path, body, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status != 200) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    last_error.clear();
    break;
  }
  if (!last_error.empty()) {
    throw ProviderError("embedding service " + cfg.remote_url + " failed after " +
                        std::to_string(cfg.remote_retries + 1) +
                        " attempts: " + last_error);
  }

  json response;
  try {
    response = json::parse(res->body);
  } catch (const json::exception &e) {
    throw ProviderError(std::string("unparseable embedding response: ") +
                        e.what());
  }
  if (!response.contains("vectors") || !response["vectors"].is_array()) {
    throw ProviderError("embedding response lacks a 'vectors' array");
  }
  const json &vectors = response["vectors"];
  if (vectors.size() != batch.size()) {
    throw ProviderError("embedding service returned " +
                        std::to_string(vectors.size()) + " vectors for " +
                        std::to_string(batch.size()) + " inputs");
  }
  std::vector<EmbeddingVector> out;
  out.reserve(vectors.size());
  for (const json &v : vectors) {
    if (!v.is_array()) throw ProviderError("embedding vector is not an array");
    if (static_cast<int>(v.size()) != expected_dim) {
      throw ConfigError(std::string(kind) + " embedding dimension mismatch: "
                        "expected " + std::to_string(expected_dim) +
                        ", received " + std::to_string(v.size()));
    }
    EmbeddingVector vec;
    vec.reserve(v.size());
    for (const json &x : v) {
      if (!x.is_number()) throw ProviderError("non-numeric embedding value");
      double d = x.get<double>();
      if (!std::isfinite(d)) throw ProviderError("non-finite embedding value");
      vec.push_back(d);
    }
    out.push_back(std::move(vec));
  }
  return out;
}

RemoteEmbedder::RemoteEmbedder(EmbedderConfig config)
    : EmbeddingProvider(std::move(config)) {
  if (this->config().provider != EmbedderConfig::Provider::kRemote) {
    throw ConfigError("RemoteEmbedder needs a remote provider config");
  }
}

std::vector<EmbeddingVector> RemoteEmbedder::Embed(
    std::span<const std::string> batch, std::string_view kind) {
  return RemoteEmbed(batch, kind, config());
}

std::vector<EmbeddingVector> RemoteEmbedder::EmbedNames(
    std::span<const std::string> names) {
  return Embed(names, "name");
}

std::vector<EmbeddingVector> RemoteEmbedder::EmbedTexts(
    std::span<const std::string> texts) {
  return Embed(texts, "content");
}

}  // namespace bib2auth
