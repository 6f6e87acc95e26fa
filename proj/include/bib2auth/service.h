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

#ifndef BIB2AUTH_SERVICE_H_
#define BIB2AUTH_SERVICE_H_

#include <memory>
#include <string>
#include <string_view>

#include "bib2auth/embeddings.h"
#include "bib2auth/model.h"

namespace bib2auth {

struct ServiceResponse {
  int status = 200;
  std::string body;  // JSON
};

// HTTP front end over an immutable model:
//   GET  /health   -> 200 {"status", "classes", "epochs_run", ...}
//   POST /predict  {author, coauthor, title, source?, threshold?}
//                  -> 200 {"predictions": [{entity, probability}], "unknown"}
// Malformed bodies get 400, bodies over kMaxBodyBytes get 413.
class PredictionService {
 public:
  static constexpr size_t kMaxBodyBytes = 64 * 1024;

  // model and provider must outlive the service.
  PredictionService(const TrainedModel &model, EmbeddingProvider &provider,
                    int top_k = 5);
  ~PredictionService();

  ServiceResponse Health() const;
  ServiceResponse Predict(std::string_view body) const;

  // Binds host:port (port 0 picks a free one) and returns the bound port.
  int Bind(const std::string &host, int port);
  // Serves until Stop(). Requires a prior Bind.
  void Run();
  void Stop();

 private:
  struct Server;
  const TrainedModel &model_;
  EmbeddingProvider &provider_;
  int top_k_;
  std::unique_ptr<Server> server_;
};

}  // namespace bib2auth

#endif  // BIB2AUTH_SERVICE_H_
