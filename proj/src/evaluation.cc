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

#include "bib2auth/evaluation.h"

#include <cstdio>
#include <numeric>

#include "bib2auth/features.h"
#include "json.hpp"

namespace bib2auth {

std::string_view EvalSliceName(EvalSlice slice) {
  return slice == EvalSlice::kFullNameOnly ? "FULL_NAME_ONLY" : "ALL_VARIANTS";
}

EvalReport ComputeReport(std::span<const int> truth,
                         std::span<const int> predicted, int num_classes,
                         EvalSlice slice) {
  if (truth.size() != predicted.size()) {
    throw Error("truth and prediction counts differ");
  }
  if (truth.empty()) throw Error("empty sample set");
  EvalReport report;
  report.slice = slice;
  report.sample_count = truth.size();
  report.per_class.assign(static_cast<size_t>(num_classes), ClassCounts{});
  for (size_t i = 0; i < truth.size(); ++i) {
    const int y = truth[i];
    const int p = predicted[i];
    if (y < 0 || y >= num_classes) {
      throw Error("true label " + std::to_string(y) + " outside the vocabulary");
    }
    if (p != kUnknownPrediction && (p < 0 || p >= num_classes)) {
      throw Error("prediction " + std::to_string(p) + " outside the vocabulary");
    }
    if (p == y) {
      ++report.per_class[y].tp;
      continue;
    }
    ++report.per_class[y].fn;
    if (p == kUnknownPrediction) {
      ++report.unknown_count;
    } else {
      ++report.per_class[p].fp;
    }
  }

  size_t tp = 0, fp = 0, fn = 0;
  double p_sum = 0, r_sum = 0, f_sum = 0;
  for (const ClassCounts &c : report.per_class) {
    tp += c.tp;
    fp += c.fp;
    fn += c.fn;
    if (c.tp + c.fn == 0) continue;
    ++report.evaluated_classes;
    const double precision =
        c.tp + c.fp == 0 ? 0.0 : static_cast<double>(c.tp) / (c.tp + c.fp);
    const double recall = static_cast<double>(c.tp) / (c.tp + c.fn);
    const double f1 =
        c.tp == 0 ? 0.0
                  : 2.0 * c.tp / (2.0 * c.tp + static_cast<double>(c.fp + c.fn));
    p_sum += precision;
    r_sum += recall;
    f_sum += f1;
  }
  const double n = static_cast<double>(report.evaluated_classes);
  report.macro_precision = p_sum / n;
  report.macro_recall = r_sum / n;
  report.macro_f1 = f_sum / n;
  report.micro_precision =
      tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
  report.micro_recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  report.micro_f1 =
      tp == 0 ? 0.0
              : 2.0 * static_cast<double>(tp) /
                    (2.0 * static_cast<double>(tp) + static_cast<double>(fp + fn));
  return report;
}

std::vector<TrainingSample> FilterSlice(std::span<const TrainingSample> samples,
                                        EvalSlice slice) {
  std::vector<TrainingSample> out;
  for (const TrainingSample &s : samples) {
    if (slice == EvalSlice::kFullNameOnly &&
        (s.author_variant.style != VariantStyle::kFull ||
         s.coauthor_variant.style != VariantStyle::kFull)) {
      continue;
    }
    out.push_back(s);
  }
  return out;
}

std::vector<int> PredictClasses(const TrainedModel &model,
                                EmbeddingProvider &provider,
                                std::span<const TrainingSample> samples,
                                std::optional<double> threshold) {
  CheckProviderMatchesModel(provider, model);
  FeatureEncoder encoder(provider);
  const std::vector<EncodedSample> encoded = encoder.Encode(samples);
  std::vector<int> predicted;
  predicted.reserve(samples.size());
  constexpr size_t kBatch = 1024;
  std::vector<size_t> rows;
  Eigen::MatrixXd x1, x2;
  for (size_t start = 0; start < encoded.size(); start += kBatch) {
    const size_t n = std::min(kBatch, encoded.size() - start);
    rows.resize(n);
    std::iota(rows.begin(), rows.end(), start);
    encoder.BuildBatch(encoded, rows, &x1, &x2);
    const Eigen::MatrixXd probs = model.network.Forward(x1, x2);
    for (Eigen::Index c = 0; c < probs.cols(); ++c) {
      Eigen::Index best = 0;
      const double top = probs.col(c).maxCoeff(&best);
      predicted.push_back(threshold && top < *threshold
                              ? kUnknownPrediction
                              : static_cast<int>(best));
    }
  }
  return predicted;
}

EvalReport Evaluate(const TrainedModel &model, EmbeddingProvider &provider,
                    std::span<const TrainingSample> samples, EvalSlice slice,
                    std::optional<double> threshold) {
  const std::vector<TrainingSample> selected = FilterSlice(samples, slice);
  if (selected.empty()) throw Error("empty sample set");
  std::vector<int> truth;
  truth.reserve(selected.size());
  for (const TrainingSample &s : selected) {
    if (s.label < 0 || s.label >= model.vocabulary.size()) {
      throw Error("sample label " + std::to_string(s.label) +
                  " outside the model vocabulary");
    }
    truth.push_back(s.label);
  }
  return ComputeReport(truth, PredictClasses(model, provider, selected, threshold),
                       model.vocabulary.size(), slice);
}

std::pair<EvalReport, EvalReport> CompareSlices(
    const TrainedModel &model, EmbeddingProvider &provider,
    std::span<const TrainingSample> samples, std::optional<double> threshold) {
  EvalReport all =
      Evaluate(model, provider, samples, EvalSlice::kAllVariants, threshold);
  EvalReport full;
  if (FilterSlice(samples, EvalSlice::kFullNameOnly).empty()) {
    full.slice = EvalSlice::kFullNameOnly;
    full.empty = true;
  } else {
    full = Evaluate(model, provider, samples, EvalSlice::kFullNameOnly, threshold);
  }
  return {std::move(all), std::move(full)};
}

std::string FormatReportTable(const EvalReport &report) {
  char buf[256];
  std::string out;
  std::snprintf(buf, sizeof(buf), "slice: %s  samples: %zu  classes: %zu%s\n",
                std::string(EvalSliceName(report.slice)).c_str(),
                report.sample_count, report.evaluated_classes,
                report.empty ? "  (empty)" : "");
  out += buf;
  std::snprintf(buf, sizeof(buf), "%-10s %8s %8s\n", "", "Macro", "Micro");
  out += buf;
  std::snprintf(buf, sizeof(buf), "%-10s %8.4f %8.4f\n", "Precision",
                report.macro_precision, report.micro_precision);
  out += buf;
  std::snprintf(buf, sizeof(buf), "%-10s %8.4f %8.4f\n", "Recall",
                report.macro_recall, report.micro_recall);
  out += buf;
  std::snprintf(buf, sizeof(buf), "%-10s %8.4f %8.4f\n", "F1-Score",
                report.macro_f1, report.micro_f1);
  out += buf;
  if (report.unknown_count > 0) {
    std::snprintf(buf, sizeof(buf), "unknown: %zu\n", report.unknown_count);
    out += buf;
  }
  return out;
}

std::string ReportToJson(const EvalReport &report) {
  nlohmann::ordered_json j;
  j["slice"] = EvalSliceName(report.slice);
  j["sample_count"] = report.sample_count;
  j["evaluated_classes"] = report.evaluated_classes;
  j["unknown_count"] = report.unknown_count;
  j["empty"] = report.empty;
  j["macro"] = {{"precision", report.macro_precision},
                {"recall", report.macro_recall},
                {"f1", report.macro_f1}};
  j["micro"] = {{"precision", report.micro_precision},
                {"recall", report.micro_recall},
                {"f1", report.micro_f1}};
  nlohmann::ordered_json per_class = nlohmann::ordered_json::array();
  for (const ClassCounts &c : report.per_class) {
    per_class.push_back({{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}});
  }
  j["per_class"] = std::move(per_class);
  return j.dump(2);
}

}  // namespace bib2auth
