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

#include "bib2auth/service.h"

#include "httplib.h"
#include "json.hpp"

namespace bib2auth {

using nlohmann::json;

namespace {

ServiceResponse ErrorResponse(int status, const std::string &reason) {
  return {status, json{{"error", reason}}.dump()};
}

}  // namespace

struct PredictionService::Server {
  httplib::Server http;
};

PredictionService::PredictionService(const TrainedModel &model,
                                     EmbeddingProvider &provider, int top_k)
    : model_(model),
      provider_(provider),
      top_k_(top_k),
      server_(std::make_unique<Server>()) {
  CheckProviderMatchesModel(provider_, model_);
  auto reply = [](httplib::Response &res, const ServiceResponse &r) {
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  httplib::Server &http = server_->http;
  http.set_payload_max_length(kMaxBodyBytes);
  http.Get("/health", [this, reply](const httplib::Request &,
                                    httplib::Response &res) {
    reply(res, Health());
  });
  http.Post("/predict", [this, reply](const httplib::Request &req,
                                      httplib::Response &res) {
    reply(res, Predict(req.body));
  });
}

PredictionService::~PredictionService() { Stop(); }

ServiceResponse PredictionService::Health() const {
  json j = {{"status", "ok"},
            {"classes", model_.vocabulary.size()},
            {"name_dim", model_.embedder.name_dim},
            {"content_dim", model_.embedder.content_dim},
            {"epochs_run", model_.metadata.epochs_run},
            {"best_epoch", model_.metadata.best_epoch},
            {"best_val_accuracy", model_.metadata.best_val_accuracy}};
  return {200, j.dump()};
}

ServiceResponse PredictionService::Predict(std::string_view body) const {
  if (body.size() > kMaxBodyBytes) {
    return ErrorResponse(413, "request body exceeds 65536 bytes");
  }
  json req = json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (req.is_discarded()) return ErrorResponse(400, "body is not valid JSON");
  if (!req.is_object()) return ErrorResponse(400, "body must be a JSON object");

  std::string fields[3];
  const char *names[3] = {"author", "coauthor", "title"};
  for (int i = 0; i < 3; ++i) {
    auto it = req.find(names[i]);
    if (it == req.end()) {
      return ErrorResponse(400, std::string("missing field ") + names[i]);
    }
    if (!it->is_string()) {
      return ErrorResponse(400, std::string("field ") + names[i] +
                                    " must be a string");
    }
    fields[i] = it->get<std::string>();
  }
  std::string source;
  if (auto it = req.find("source"); it != req.end() && !it->is_null()) {
    if (!it->is_string()) {
      return ErrorResponse(400, "field source must be a string");
    }
    source = it->get<std::string>();
  }
  std::optional<double> threshold;
  if (auto it = req.find("threshold"); it != req.end() && !it->is_null()) {
    if (!it->is_number()) {
      return ErrorResponse(400, "field threshold must be a number");
    }
    threshold = it->get<double>();
  }

  PredictionResult result;
  try {
    result = PredictAuthor(model_, provider_, fields[0], fields[1], fields[2],
                           source, top_k_, threshold);
  } catch (const InvalidInputError &e) {
    return ErrorResponse(400, e.what());
  } catch (const std::exception &e) {
    return ErrorResponse(500, e.what());
  }
  json predictions = json::array();
  for (const Prediction &p : result.top) {
    predictions.push_back({{"entity", p.entity}, {"probability", p.probability}});
  }
  return {200,
          json{{"predictions", predictions}, {"unknown", result.unknown}}.dump()};
}

int PredictionService::Bind(const std::string &host, int port) {
  httplib::Server &http = server_->http;
  if (port == 0) {
    const int bound = http.bind_to_any_port(host);
    if (bound < 0) throw Error("cannot bind " + host);
    return bound;
  }
  if (!http.bind_to_port(host, port)) {
    throw Error("cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void PredictionService::Run() {
  if (!server_->http.listen_after_bind()) throw Error("server stopped abnormally");
}

void PredictionService::Stop() {
  if (server_) server_->http.stop();
}

}  // namespace bib2auth
