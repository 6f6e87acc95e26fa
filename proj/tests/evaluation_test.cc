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

#include <algorithm>
#include <map>
#include <numeric>

#include "bib2auth/evaluation.h"
#include "bib2auth/random.h"
#include "bib2auth/trainer.h"
#include "doctest.h"

namespace bib2auth {
namespace {

struct OracleMetrics {
  double macro_p = 0, macro_r = 0, macro_f1 = 0, micro_f1 = 0;
};

// Straight from the definitions: per-class precision/recall over the
// classes that occur in truth, F1 as the harmonic mean.
OracleMetrics Oracle(const std::vector<int> &truth,
                     const std::vector<int> &pred, int k) {
  OracleMetrics o;
  int present = 0;
  double tp_all = 0, fp_all = 0, fn_all = 0;
  for (int c = 0; c < k; ++c) {
    double tp = 0, fp = 0, fn = 0;
    for (size_t i = 0; i < truth.size(); ++i) {
      if (pred[i] == c && truth[i] == c) ++tp;
      if (pred[i] == c && truth[i] != c) ++fp;
      if (pred[i] != c && truth[i] == c) ++fn;
    }
    tp_all += tp;
    fp_all += fp;
    fn_all += fn;
    if (tp + fn == 0) continue;
    ++present;
    const double p = tp + fp > 0 ? tp / (tp + fp) : 0.0;
    const double r = tp / (tp + fn);
    o.macro_p += p;
    o.macro_r += r;
    o.macro_f1 += p + r > 0 ? 2 * p * r / (p + r) : 0.0;
  }
  o.macro_p /= present;
  o.macro_r /= present;
  o.macro_f1 /= present;
  const double mp = tp_all / (tp_all + fp_all);
  const double mr = tp_all / (tp_all + fn_all);
  o.micro_f1 = mp + mr > 0 ? 2 * mp * mr / (mp + mr) : 0.0;
  return o;
}

TEST_SUITE("evaluation") {
  TEST_CASE("worked example") {
    // Class 0: tp 2, fp 1, fn 1. Class 1: tp 1, fp 1, fn 1. Class 2: tp 0,
    // fp 0, fn 1. Class 3 never occurs.
    const std::vector<int> truth = {0, 0, 0, 1, 1, 2};
    const std::vector<int> pred = {0, 0, 1, 1, 0, kUnknownPrediction};
    const EvalReport r = ComputeReport(truth, pred, 4);
    CHECK(r.evaluated_classes == 3);
    CHECK(r.unknown_count == 1);
    CHECK(r.macro_precision == doctest::Approx((2.0 / 3 + 0.5 + 0) / 3));
    CHECK(r.macro_recall == doctest::Approx((2.0 / 3 + 0.5 + 0) / 3));
    CHECK(r.macro_f1 == doctest::Approx((2.0 / 3 + 0.5 + 0) / 3));
    CHECK(r.micro_precision == doctest::Approx(3.0 / 5));
    CHECK(r.micro_recall == doctest::Approx(3.0 / 6));
    CHECK(r.micro_f1 == doctest::Approx(6.0 / 11));
  }

  TEST_CASE("matches the oracle on random predictions") {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
      const int k = 2 + static_cast<int>(rng.Below(9));
      const int n = 1 + static_cast<int>(rng.Below(60));
      std::vector<int> truth(n), pred(n);
      for (int i = 0; i < n; ++i) {
        truth[i] = static_cast<int>(rng.Below(k));
        pred[i] = static_cast<int>(rng.Below(k));
      }
      const EvalReport r = ComputeReport(truth, pred, k);
      const OracleMetrics o = Oracle(truth, pred, k);
      CHECK(r.macro_precision == doctest::Approx(o.macro_p));
      CHECK(r.macro_recall == doctest::Approx(o.macro_r));
      CHECK(r.macro_f1 == doctest::Approx(o.macro_f1));
      CHECK(r.micro_f1 == doctest::Approx(o.micro_f1));
      // Without rejections every mistake is one fp and one fn.
      CHECK(r.micro_precision == doctest::Approx(r.micro_recall));
      CHECK(r.micro_f1 == doctest::Approx(r.micro_precision));
    }
  }

  TEST_CASE("perfect predictions score one") {
    const std::vector<int> truth = {0, 1, 2, 2, 1};
    const EvalReport r = ComputeReport(truth, truth, 5);
    CHECK(r.macro_precision == 1.0);
    CHECK(r.macro_recall == 1.0);
    CHECK(r.macro_f1 == 1.0);
    CHECK(r.micro_f1 == 1.0);
  }

  TEST_CASE("all unknown scores zero") {
    const std::vector<int> truth = {0, 1};
    const std::vector<int> pred = {kUnknownPrediction, kUnknownPrediction};
    const EvalReport r = ComputeReport(truth, pred, 2);
    CHECK(r.micro_f1 == 0.0);
    CHECK(r.macro_f1 == 0.0);
    CHECK(r.unknown_count == 2);
  }

  TEST_CASE("sample order does not matter") {
    Rng rng(5);
    std::vector<int> truth(40), pred(40);
    for (int i = 0; i < 40; ++i) {
      truth[i] = static_cast<int>(rng.Below(6));
      pred[i] = rng.Below(4) == 0 ? kUnknownPrediction
                                  : static_cast<int>(rng.Below(6));
    }
    const EvalReport a = ComputeReport(truth, pred, 6);
    std::vector<size_t> order(40);
    std::iota(order.begin(), order.end(), 0);
    rng.Shuffle(std::span<size_t>(order));
    std::vector<int> t2, p2;
    for (size_t i : order) {
      t2.push_back(truth[i]);
      p2.push_back(pred[i]);
    }
    const EvalReport b = ComputeReport(t2, p2, 6);
    CHECK(a.macro_f1 == b.macro_f1);
    CHECK(a.micro_f1 == b.micro_f1);
  }

  TEST_CASE("fixing a mistake never lowers micro F1") {
    Rng rng(8);
    std::vector<int> truth(30), pred(30);
    for (int i = 0; i < 30; ++i) {
      truth[i] = static_cast<int>(rng.Below(4));
      pred[i] = static_cast<int>(rng.Below(4));
    }
    double last = ComputeReport(truth, pred, 4).micro_f1;
    for (int i = 0; i < 30; ++i) {
      pred[i] = truth[i];
      const double now = ComputeReport(truth, pred, 4).micro_f1;
      CHECK(now >= last);
      last = now;
    }
    CHECK(last == 1.0);
  }

  TEST_CASE("invalid inputs") {
    const std::vector<int> none;
    CHECK_THROWS_WITH(ComputeReport(none, none, 3), "empty sample set");
    const std::vector<int> a = {0, 1};
    const std::vector<int> b = {0};
    CHECK_THROWS(ComputeReport(a, b, 3));
  }

  TEST_CASE("full-name slice filter") {
    TrainingSample full;
    full.author_variant = {VariantStyle::kFull, "Ann Lee"};
    full.coauthor_variant = {VariantStyle::kFull, "Bo Chen"};
    TrainingSample mixed = full;
    mixed.coauthor_variant = {VariantStyle::kInitialLast, "B. Chen"};
    const std::vector<TrainingSample> samples = {full, mixed, full};
    CHECK(FilterSlice(samples, EvalSlice::kFullNameOnly).size() == 2);
    CHECK(FilterSlice(samples, EvalSlice::kAllVariants).size() == 3);
    CHECK(EvalSliceName(EvalSlice::kAllVariants) == "ALL_VARIANTS");
    CHECK(EvalSliceName(EvalSlice::kFullNameOnly) == "FULL_NAME_ONLY");
  }

  TEST_CASE("model evaluation and empty slices") {
    TrainedModel m;
    m.embedder.name_dim = 8;
    m.embedder.content_dim = 8;
    m.vocabulary = EntityVocabulary::FromIds({"Ann Lee", "Bo Chen"});
    NetworkTopology t = DefaultTopology(m.embedder, 2);
    t.branch1_hidden = 4;
    t.branch2_hidden = 4;
    t.trunk_hidden = {4};
    m.network = Network(t);
    m.network.InitializeWeights(1);
    BuiltinEmbedder provider(m.embedder);

    TrainingSample s;
    s.author_variant = {VariantStyle::kInitialLast, "A. Lee"};
    s.coauthor_variant = {VariantStyle::kFull, "Bo Chen"};
    s.title = "T";
    s.label = 0;
    const std::vector<TrainingSample> samples = {s, s};
    const EvalReport all = Evaluate(m, provider, samples,
                                    EvalSlice::kAllVariants);
    CHECK(all.sample_count == 2);
    CHECK_THROWS(Evaluate(m, provider, samples, EvalSlice::kFullNameOnly));
    const auto [a, f] = CompareSlices(m, provider, samples);
    CHECK_FALSE(a.empty);
    CHECK(f.empty);
    CHECK(ReportToJson(f).find("\"empty\"") != std::string::npos);

    // A threshold above one rejects every mention.
    const EvalReport rejected =
        Evaluate(m, provider, samples, EvalSlice::kAllVariants, 1.1);
    CHECK(rejected.unknown_count == 2);
    CHECK(rejected.micro_f1 == 0.0);

    std::vector<TrainingSample> bad = samples;
    bad[0].label = 7;
    CHECK_THROWS(Evaluate(m, provider, bad, EvalSlice::kAllVariants));
  }
}

}  // namespace
}  // namespace bib2auth
