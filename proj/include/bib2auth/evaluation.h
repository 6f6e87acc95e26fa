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

#ifndef BIB2AUTH_EVALUATION_H_
#define BIB2AUTH_EVALUATION_H_

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bib2auth/embeddings.h"
#include "bib2auth/model.h"
#include "bib2auth/samplegen.h"

namespace bib2auth {

enum class EvalSlice { kAllVariants, kFullNameOnly };

std::string_view EvalSliceName(EvalSlice slice);

// Prediction value for a mention rejected by the confidence threshold.
inline constexpr int kUnknownPrediction = -1;

struct ClassCounts {
  size_t tp = 0;
  size_t fp = 0;
  size_t fn = 0;
};

struct EvalReport {
  EvalSlice slice = EvalSlice::kAllVariants;
  std::vector<ClassCounts> per_class;
  double macro_precision = 0;
  double macro_recall = 0;
  double macro_f1 = 0;
  double micro_precision = 0;
  double micro_recall = 0;
  double micro_f1 = 0;
  size_t sample_count = 0;
  size_t unknown_count = 0;
  // Classes with at least one true sample; the macro averages run over them.
  size_t evaluated_classes = 0;
  // Set when the slice selected no samples.
  bool empty = false;
};

// Metrics from true and predicted class indices. A kUnknownPrediction is a
// false negative for the true class and a false positive for nobody. Macro
// averages cover classes present in truth; a class never predicted has
// precision 0.
EvalReport ComputeReport(std::span<const int> truth,
                         std::span<const int> predicted, int num_classes,
                         EvalSlice slice = EvalSlice::kAllVariants);

// Samples whose author and co-author variants are both FULL.
std::vector<TrainingSample> FilterSlice(std::span<const TrainingSample> samples,
                                        EvalSlice slice);

// Argmax class per sample, or kUnknownPrediction when the top probability
// is below threshold.
std::vector<int> PredictClasses(const TrainedModel &model,
                                EmbeddingProvider &provider,
                                std::span<const TrainingSample> samples,
                                std::optional<double> threshold);

// Throws on an empty (post-slice) sample set and on labels outside the
// model vocabulary.
EvalReport Evaluate(const TrainedModel &model, EmbeddingProvider &provider,
                    std::span<const TrainingSample> samples, EvalSlice slice,
                    std::optional<double> threshold = std::nullopt);

// Both slices with the same model and threshold. An empty full-name slice
// yields a report with empty = true rather than an error.
std::pair<EvalReport, EvalReport> CompareSlices(
    const TrainedModel &model, EmbeddingProvider &provider,
    std::span<const TrainingSample> samples,
    std::optional<double> threshold = std::nullopt);

std::string FormatReportTable(const EvalReport &report);
std::string ReportToJson(const EvalReport &report);

}  // namespace bib2auth

#endif  // BIB2AUTH_EVALUATION_H_
