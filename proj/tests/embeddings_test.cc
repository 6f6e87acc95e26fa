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

#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "bib2auth/embeddings.h"
#include "doctest.h"
#include "json.hpp"
#include "stub_server.h"

namespace bib2auth {
namespace {

// Cosine of exact character n-gram count vectors (no hashing), over the
// lowercased name wrapped in ^...$. ASCII inputs only.
double NgramCosine(const std::string &a, const std::string &b) {
  auto grams = [](std::string s) {
    for (char &c : s) c = static_cast<char>(std::tolower(c));
    s = "^" + s + "$";
    std::map<std::string, double> counts;
    for (size_t n : {2u, 3u}) {
      for (size_t i = 0; i + n <= s.size(); ++i) counts[s.substr(i, n)] += 1;
    }
    return counts;
  };
  auto ga = grams(a), gb = grams(b);
  double dot = 0, na = 0, nb = 0;
  for (auto &[g, c] : ga) {
    na += c * c;
    if (gb.count(g)) dot += c * gb[g];
  }
  for (auto &[g, c] : gb) nb += c * c;
  return dot / std::sqrt(na * nb);
}

// Cosine of lowercase token sets (tokens are distinct in the inputs used).
double TokenCosine(const std::string &a, const std::string &b) {
  auto tokens = [](const std::string &s) {
    std::set<std::string> t;
    std::istringstream in(s);
    std::string w;
    while (in >> w) {
      for (char &c : w) c = static_cast<char>(std::tolower(c));
      t.insert(w);
    }
    return t;
  };
  auto ta = tokens(a), tb = tokens(b);
  double shared = 0;
  for (const auto &w : ta) shared += tb.count(w);
  return shared / std::sqrt(static_cast<double>(ta.size() * tb.size()));
}

TEST_SUITE("embeddings") {
  const EmbedderConfig cfg;

  TEST_CASE("name vectors have the configured dim and unit norm") {
    for (const char *name : {"Weihua Xiong", "W. Xiong", "Xiong, W.", "X",
                             "Jörg Müller", "李 兵"}) {
      EmbeddingVector v = EmbedName(name, cfg);
      CHECK(v.size() == 200);
      CHECK(L2Norm(v) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(EmbedName(name, cfg) == v);
    }
    EmbedderConfig small = cfg;
    small.name_dim = 16;
    CHECK(EmbedName("Weihua Xiong", small).size() == 16);
    CHECK_THROWS(EmbedName("   ", cfg));
  }

  TEST_CASE("name embedding follows the documented construction") {
    // "^xi$" bigrams and trigrams hashed with FNV-1a 64 xor the seed.
    EmbeddingVector expected(cfg.name_dim, 0.0);
    for (const char *gram : {"^x", "xi", "i$", "^xi", "xi$"}) {
      uint64_t h = 14695981039346656037ULL;
      for (const char *p = gram; *p; ++p) {
        h ^= static_cast<unsigned char>(*p);
        h *= 1099511628211ULL;
      }
      h ^= cfg.hash_seed;
      expected[h % cfg.name_dim] += (h >> 63) ? -1.0 : 1.0;
    }
    double norm = 0;
    for (double x : expected) norm += x * x;
    for (double &x : expected) x /= std::sqrt(norm);
    const EmbeddingVector got = EmbedName("XI", cfg);
    for (int i = 0; i < cfg.name_dim; ++i) {
      CHECK(got[i] == doctest::Approx(expected[i]).epsilon(1e-15));
    }
  }

  TEST_CASE("misspelling is closer than an unrelated name") {
    const double pin = CosineSimilarity(EmbedName("Ponsard", cfg),
                                        EmbedName("Pinsard", cfg));
    const double ram = CosineSimilarity(EmbedName("Ponsard", cfg),
                                        EmbedName("Ramdoyal", cfg));
    CHECK(pin > ram);
    CHECK(NgramCosine("Ponsard", "Pinsard") > NgramCosine("Ponsard", "Ramdoyal"));
    CHECK(pin == doctest::Approx(NgramCosine("Ponsard", "Pinsard")).epsilon(0.2));
  }

  TEST_CASE("hashed cosine tracks the exact n-gram cosine") {
    const std::vector<std::pair<std::string, std::string>> pairs = {
        {"Weihua Xiong", "W. Xiong"},   {"Xiong, Weihua", "Weihua Xiong"},
        {"Christophe Ponsard", "C. Ponsard"}, {"Bing Li", "Bing Lee"},
        {"Ramdoyal", "Ponsard"},        {"Abinaya", "Chandrasekaran"}};
    for (const auto &[a, b] : pairs) {
      const double hashed = CosineSimilarity(EmbedName(a, cfg), EmbedName(b, cfg));
      CHECK(std::abs(hashed - NgramCosine(a, b)) < 0.15);
    }
  }

  TEST_CASE("text embedding") {
    const EmbeddingVector empty = EmbedText("", cfg);
    CHECK(empty.size() == 768);
    CHECK(L2Norm(empty) == 0.0);
    CHECK(L2Norm(EmbedText("...", cfg)) == 0.0);
    CHECK(EmbedText("Visual saliency map", cfg) ==
          EmbedText("visual SALIENCY map", cfg));
    CHECK(EmbedText("a-b", cfg) == EmbedText("a b", cfg));
    CHECK(L2Norm(EmbedText("Visual saliency map", cfg)) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("token overlap ordering matches the oracle") {
    const std::string a = "visual saliency map from tensor analysis";
    const std::string b = "visual saliency detection";
    const std::string c = "consensus protocols in distributed systems";
    const double ab = CosineSimilarity(EmbedText(a, cfg), EmbedText(b, cfg));
    const double ac = CosineSimilarity(EmbedText(a, cfg), EmbedText(c, cfg));
    CHECK(ab > ac);
    CHECK(TokenCosine(a, b) > TokenCosine(a, c));
    CHECK(ab == doctest::Approx(TokenCosine(a, b)).epsilon(0.1));
    CHECK(std::abs(ac - TokenCosine(a, c)) < 0.1);
  }

  TEST_CASE("content averaging") {
    const std::string title = "Visual saliency map";
    CHECK(ContentEmbedding(title, title, cfg) == EmbedText(title, cfg));
    CHECK(ContentEmbedding(title, "", cfg) == EmbedText(title, cfg));
    CHECK(ContentEmbedding(title, "   ", cfg) == EmbedText(title, cfg));
    const EmbeddingVector u = EmbedText(title, cfg);
    const EmbeddingVector v = EmbedText("IEEE Trans. Image Process.", cfg);
    const EmbeddingVector got =
        ContentEmbedding(title, "IEEE Trans. Image Process.", cfg);
    for (size_t i = 0; i < u.size(); ++i) CHECK(got[i] == (u[i] + v[i]) / 2);
    CHECK_THROWS(ContentEmbedding("", "J", cfg));
  }

  TEST_CASE("builtin provider matches the free functions") {
    BuiltinEmbedder provider(cfg);
    std::vector<std::string> names = {"A B", "C D"};
    auto vecs = provider.EmbedNames(names);
    CHECK(vecs[0] == EmbedName("A B", cfg));
    CHECK(vecs[1] == EmbedName("C D", cfg));
    CHECK(provider.Content("T x", "S") == ContentEmbedding("T x", "S", cfg));
  }

  TEST_CASE("config validation") {
    EmbedderConfig bad = cfg;
    bad.name_dim = 4;
    CHECK_THROWS_AS(bad.Validate(), ConfigError);
    bad = cfg;
    bad.char_ngram_sizes = {};
    CHECK_THROWS_AS(bad.Validate(), ConfigError);
    bad = cfg;
    bad.provider = EmbedderConfig::Provider::kRemote;
    CHECK_THROWS_AS(bad.Validate(), ConfigError);
  }

  TEST_CASE("remote provider protocol") {
    testing::StubServer server;
    std::string last_kind;
    server.http().Post("/v1/embed", [&](const httplib::Request &req,
                                        httplib::Response &res) {
      auto body = nlohmann::json::parse(req.body);
      last_kind = body["kind"];
      const int dim = last_kind == "name" ? 8 : 12;
      nlohmann::json vectors = nlohmann::json::array();
      int i = 0;
      for (const auto &t : body["texts"]) {
        // Vector encodes the request position and text length.
        std::vector<double> v(dim, 0.0);
        v[0] = i++;
        v[1] = static_cast<double>(t.get<std::string>().size());
        if (t == "wrong") v.resize(dim + 1);
        vectors.push_back(v);
      }
      res.set_content(nlohmann::json{{"vectors", vectors}}.dump(),
                      "application/json");
    });
    server.Start();

    EmbedderConfig remote = cfg;
    remote.provider = EmbedderConfig::Provider::kRemote;
    remote.remote_url = server.url("/v1");
    remote.name_dim = 8;
    remote.content_dim = 12;
    auto provider = MakeEmbeddingProvider(remote);

    std::vector<std::string> one = {"solo"};
    auto single = provider->EmbedNames(one);
    REQUIRE(single.size() == 1);
    CHECK(single[0] == EmbeddingVector{0, 4, 0, 0, 0, 0, 0, 0});
    CHECK(last_kind == "name");

    std::vector<std::string> three = {"a", "bb", "ccc"};
    auto batch = provider->EmbedTexts(three);
    REQUIRE(batch.size() == 3);
    CHECK(last_kind == "content");
    for (int i = 0; i < 3; ++i) {
      CHECK(batch[i].size() == 12);
      CHECK(batch[i][0] == i);
      CHECK(batch[i][1] == i + 1);
    }

    std::vector<std::string> wrong = {"wrong"};
    try {
      provider->EmbedNames(wrong);
      FAIL("expected a dimension error");
    } catch (const ConfigError &e) {
      const std::string msg = e.what();
      CHECK(msg.find("expected 8") != std::string::npos);
      CHECK(msg.find("received 9") != std::string::npos);
    }
  }

  TEST_CASE("remote provider failure") {
    testing::StubServer server;
    int calls = 0;
    server.http().Post("/embed", [&](const httplib::Request &,
                                     httplib::Response &res) {
      ++calls;
      res.status = 500;
    });
    server.Start();
    EmbedderConfig remote = cfg;
    remote.provider = EmbedderConfig::Provider::kRemote;
    remote.remote_url = server.url();
    remote.remote_retries = 1;
    RemoteEmbedder provider(remote);
    std::vector<std::string> one = {"x"};
    CHECK_THROWS_AS(provider.EmbedNames(one), ProviderError);
    CHECK(calls == 2);
  }
}

}  // namespace
}  // namespace bib2auth
