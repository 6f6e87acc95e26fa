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

#include <thread>
#include <vector>

#include "bib2auth/service.h"
#include "bib2auth/trainer.h"
#include "doctest.h"
#include "httplib.h"
#include "json.hpp"

namespace bib2auth {
namespace {

using nlohmann::json;

TrainedModel SmallModel() {
  TrainedModel m;
  m.embedder.name_dim = 8;
  m.embedder.content_dim = 8;
  m.vocabulary = EntityVocabulary::FromIds({"Ann Lee", "Bo Chen", "Cy Diaz"});
  NetworkTopology t = DefaultTopology(m.embedder, 3);
  t.branch1_hidden = 6;
  t.branch2_hidden = 6;
  t.trunk_hidden = {6};
  m.network = Network(t);
  m.network.InitializeWeights(2);
  m.metadata = {3, 2, 0.5};
  return m;
}

const char kBody[] =
    R"({"author": "A. Lee", "coauthor": "Bo Chen", "title": "Graphs"})";

// Server running on a background thread for the duration of a test.
class RunningService {
 public:
  RunningService() : provider_(model_.embedder), service_(model_, provider_) {
    port_ = service_.Bind("127.0.0.1", 0);
    thread_ = std::thread([this] { service_.Run(); });
  }
  ~RunningService() {
    service_.Stop();
    thread_.join();
  }
  httplib::Client Client() const {
    httplib::Client c("127.0.0.1", port_);
    c.set_connection_timeout(5);
    c.set_read_timeout(10);
    return c;
  }

 private:
  TrainedModel model_ = SmallModel();
  BuiltinEmbedder provider_;
  PredictionService service_;
  int port_ = 0;
  std::thread thread_;
};

TEST_SUITE("service") {
  TEST_CASE("handlers without a socket") {
    const TrainedModel m = SmallModel();
    BuiltinEmbedder provider(m.embedder);
    PredictionService service(m, provider, 2);
    const ServiceResponse health = service.Health();
    CHECK(health.status == 200);
    CHECK(json::parse(health.body)["classes"] == 3);

    const ServiceResponse ok = service.Predict(kBody);
    REQUIRE(ok.status == 200);
    const json j = json::parse(ok.body);
    CHECK(j["predictions"].size() == 2);
    CHECK(j["unknown"] == false);

    CHECK(service.Predict("{").status == 400);
    CHECK(service.Predict("[]").status == 400);
    CHECK(service.Predict(R"({"author": "A", "coauthor": "B"})").status ==
          400);
    CHECK(service.Predict(R"({"author": 1, "coauthor": "B", "title": "T"})")
              .status == 400);
    CHECK(service.Predict(R"({"author": "", "coauthor": "B", "title": "T"})")
              .status == 400);
    const ServiceResponse unknown = service.Predict(
        R"({"author": "A", "coauthor": "B", "title": "T", "threshold": 1.1})");
    REQUIRE(unknown.status == 200);
    CHECK(json::parse(unknown.body)["unknown"] == true);
    CHECK(service.Predict(std::string(PredictionService::kMaxBodyBytes + 1,
                                      ' '))
              .status == 413);
  }

  TEST_CASE("http endpoints") {
    RunningService running;
    httplib::Client client = running.Client();
    auto health = client.Get("/health");
    REQUIRE(health);
    CHECK(health->status == 200);

    auto ok = client.Post("/predict", kBody, "application/json");
    REQUIRE(ok);
    CHECK(ok->status == 200);

    auto missing = client.Post(
        "/predict", R"({"author": "A. Lee", "coauthor": "Bo Chen"})",
        "application/json");
    REQUIRE(missing);
    CHECK(missing->status == 400);
    CHECK(json::parse(missing->body).contains("error"));

    std::string big = R"({"author": "A", "coauthor": "B", "title": ")" +
                      std::string(70 * 1024, 'x') + "\"}";
    auto too_big = client.Post("/predict", big, "application/json");
    REQUIRE(too_big);
    CHECK(too_big->status == 413);

    auto none = client.Get("/nothing");
    REQUIRE(none);
    CHECK(none->status == 404);
  }

  TEST_CASE("concurrent identical requests agree") {
    RunningService running;
    const std::string expected =
        running.Client().Post("/predict", kBody, "application/json")->body;
    std::vector<std::string> bodies(50);
    std::vector<int> statuses(50, 0);
    std::vector<std::thread> threads;
    for (int i = 0; i < 50; ++i) {
      threads.emplace_back([&, i] {
        httplib::Client c = running.Client();
        auto r = c.Post("/predict", kBody, "application/json");
        if (!r) statuses[i] = -static_cast<int>(r.error());
        if (r) {
          statuses[i] = r->status;
          bodies[i] = r->body;
        }
      });
    }
    for (std::thread &t : threads) t.join();
    for (int i = 0; i < 50; ++i) {
      CHECK(statuses[i] == 200);
      CHECK(bodies[i] == expected);
    }
  }
}

}  // namespace
}  // namespace bib2auth
