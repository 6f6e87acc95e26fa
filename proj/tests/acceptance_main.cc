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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bib2auth/config.h"
#include "bib2auth/dblp_xml.h"
#include "bib2auth/embeddings.h"
#include "bib2auth/evaluation.h"
#include "bib2auth/model.h"
#include "bib2auth/pipeline.h"
#include "bib2auth/samplegen.h"
#include "bib2auth/synthetic.h"
#include "bib2auth/trainer.h"
#include "gradient_check.h"
#include "random_corpus.h"
#include "test_util.h"

namespace bib2auth {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string Fmt(const char *format, double a, double b = 0, double c = 0,
                double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c, d);
  return buf;
}

// ---------------------------------------------------------------------------

Outcome GradientCorrectness() {
  const auto start = Clock::now();
  double worst = 0;
  size_t params = 0;
  Rng rng(2024);
  for (uint64_t seed = 1; seed <= 3; ++seed) {
    const Network net = testing::RandomTinyNetwork(seed);
    const Eigen::MatrixXd x1 = testing::RandomMatrix(rng, 8, 7);
    const Eigen::MatrixXd x2 = testing::RandomMatrix(rng, 5, 7);
    const std::vector<int> labels = {0, 1, 2, 2, 1, 0, 1};
    for (bool dropout : {false, true}) {
      const auto r = testing::CheckGradients(
          net, x1, x2, labels, {0.5, 1.5, 1.0},
          dropout ? std::optional<uint64_t>(seed) : std::nullopt, 1e-4);
      worst = std::max(worst, r.max_relative_error);
      params = r.parameters;
    }
  }
  const double elapsed = Seconds(start);
  return {worst < 1e-4 && elapsed < 10,
          Fmt("max relative error %.2e over %.0f parameters, %.2f s", worst,
              static_cast<double>(params), elapsed)};
}

Outcome MetricsOracle() {
  // A=0, B=1, C=2. Confusion counts by hand: A tp2 fp1 fn0, B tp1 fp0 fn1,
  // C tp1 fp0 fn0.
  const std::vector<int> truth = {0, 0, 1, 1, 2};
  const std::vector<int> pred = {0, 0, 0, 1, 2};
  const double macro_p = (2.0 / 3 + 1 + 1) / 3;
  const double macro_r = (1 + 0.5 + 1) / 3;
  const double macro_f1 = (0.8 + 2.0 / 3 + 1) / 3;
  const EvalReport r = ComputeReport(truth, pred, 3);
  const bool micro = r.micro_precision == 0.8 && r.micro_recall == 0.8 &&
                     r.micro_f1 == 0.8;
  const bool macro = std::abs(r.macro_precision - macro_p) < 1e-4 &&
                     std::abs(r.macro_recall - macro_r) < 1e-4 &&
                     std::abs(r.macro_f1 - macro_f1) < 1e-4;
  return {micro && macro,
          Fmt("micro P/R/F1 %.4f/%.4f/%.4f, macro P/R/F1 ", r.micro_precision,
              r.micro_recall, r.micro_f1) +
              Fmt("%.4f/%.4f/%.4f", r.macro_precision, r.macro_recall,
                  r.macro_f1)};
}

// Runs ingest -> sample -> prepare -> train into dir.
struct PipelineRun {
  TrainResult train;
  DatasetSplit split;
  double seconds = 0;
};

PipelineRun RunDeskPipeline(const fs::path &dir) {
  PipelineConfig c =
      LoadConfigFile(std::string(BIB2AUTH_TEST_DATA) + "/desk_config.json");
  c.paths.dblp_xml = std::string(BIB2AUTH_TEST_DATA) + "/synthetic_dblp.xml";
  c.paths.corpus = (dir / "corpus.jsonl").string();
  c.paths.sample = (dir / "sample.jsonl").string();
  c.paths.splits_dir = (dir / "splits").string();
  c.paths.model = (dir / "model.b2am").string();
  c.paths.history = (dir / "history.csv").string();
  const auto start = Clock::now();
  RunIngest(c.paths.dblp_xml, c.paths.corpus, c.venues, nullptr, nullptr);
  RunSample(c.paths.corpus, c.paths.sample, c.sampling);
  PipelineRun run;
  run.split = RunPrepare(c.paths.sample, c.paths.splits_dir, c.fractions,
                         c.split_seed, c.variant_policy);
  BuiltinEmbedder provider(c.embedder);
  run.train = RunTrain(c.paths.splits_dir, c.paths.model, c.paths.history, c,
                       provider);
  run.seconds = Seconds(start);
  return run;
}

struct DeskOutcome {
  Outcome end_to_end;
  Outcome trend;
};

DeskOutcome DeskScale(const fs::path &dir) {
  const PipelineRun run = RunDeskPipeline(dir);
  BuiltinEmbedder provider(run.train.model.embedder);
  const auto [all, full] =
      CompareSlices(run.train.model, provider, run.split.test);
  DeskOutcome out;
  out.end_to_end = {
      all.micro_f1 >= 0.90 && run.seconds < 300,
      Fmt("ALL_VARIANTS micro F1 %.4f on %.0f test samples, %.1f s",
          all.micro_f1, static_cast<double>(all.sample_count), run.seconds)};
  out.trend = {!full.empty && full.micro_f1 >= all.micro_f1 - 0.02,
               Fmt("FULL_NAME_ONLY %.4f vs ALL_VARIANTS %.4f", full.micro_f1,
                   all.micro_f1)};
  return out;
}

Outcome SplitInvariants() {
  int failures = 0;
  double worst_dev = 0;
  std::string first_problem;
  for (uint64_t seed = 1; seed <= 50; ++seed) {
    const int records = 100 + static_cast<int>((seed * 37) % 300);
    const int authors = 30 + static_cast<int>((seed * 11) % 60);
    const auto corpus = testing::RandomCorpus(seed, records, authors);
    const DatasetSplit split =
        BuildSplit(corpus, {}, seed, VariantPolicy::All());
    bool ok = true;
    std::set<std::string> tt, tv, te;
    std::set<int> labels;
    for (const auto &s : split.train) {
      tt.insert(s.title);
      labels.insert(s.label);
    }
    for (const auto &s : split.validation) {
      tv.insert(s.title);
      ok &= labels.count(s.label) > 0;
    }
    for (const auto &s : split.test) {
      te.insert(s.title);
      ok &= labels.count(s.label) > 0;
    }
    for (const auto &t : tv) ok &= !tt.count(t);
    for (const auto &t : te) ok &= !tt.count(t) && !tv.count(t);
    const double n = static_cast<double>(split.train.size() +
                                         split.validation.size() +
                                         split.test.size());
    const double dev = std::max(
        {std::abs(split.train.size() / n - 0.66),
         std::abs(split.validation.size() / n - 0.17),
         std::abs(split.test.size() / n - 0.17)});
    worst_dev = std::max(worst_dev, dev);
    ok &= dev <= 0.03;
    if (!ok) {
      ++failures;
      if (first_problem.empty()) {
        first_problem = ", first failure at seed " + std::to_string(seed);
      }
    }
  }
  return {failures == 0,
          Fmt("%.0f/50 corpora violate, worst fraction deviation %.2f pp",
              failures, 100 * worst_dev) +
              first_problem};
}

DatasetSplit SmallSplit() {
  SyntheticCorpusConfig config;
  config.records = 80;
  return BuildSplit(GenerateSyntheticCorpus(config), {}, 3,
                    VariantPolicy::FullOnly());
}

Outcome EarlyStoppingAndCheckpoint(const fs::path &dir) {
  const DatasetSplit split = SmallSplit();
  EmbedderConfig embedder;
  embedder.name_dim = 16;
  embedder.content_dim = 16;
  BuiltinEmbedder provider(embedder);
  NetworkTopology topology = DefaultTopology(embedder, split.vocabulary.size());
  topology.branch1_hidden = 8;
  topology.branch2_hidden = 8;
  topology.trunk_hidden = {8};

  struct Script {
    int plateau;
    int patience;
    std::vector<double> accuracy;  // cycled
    int expected_best;
  };
  // The loss falls until the plateau epoch and then stays flat.
  const std::vector<Script> scripts = {
      {5, 3, {0.1, 0.4, 0.7, 0.5, 0.6, 0.2, 0.7, 0.7}, 3},
      {1, 1, {0.9, 0.9}, 1},
      {10, 4, {0.2, 0.3, 0.3, 0.5, 0.5, 0.4, 0.1, 0.2, 0.3, 0.4,
               0.9, 0.9, 0.9, 0.9}, 11},
      {3, 6, {0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5}, 1},
  };
  std::string detail;
  bool pass = true;
  for (const Script &s : scripts) {
    TrainConfig config;
    config.patience = s.patience;
    config.max_epochs = 1000;
    std::vector<Network> snapshots;
    TrainOptions options;
    options.validation = [&](const Network &, int epoch) {
      const double loss = epoch <= s.plateau ? 1.0 / epoch : 1.0 / s.plateau;
      return ValidationResult{
          loss, s.accuracy[(epoch - 1) % s.accuracy.size()]};
    };
    options.on_epoch = [&](const EpochStats &, const Network &net) {
      snapshots.push_back(net);
    };
    const TrainResult r = Train(split, topology, config, provider, options);
    const std::string path = (dir / "stub.b2am").string();
    SaveModel(r.model, path);
    const TrainedModel loaded = LoadModel(path);
    const int halted = static_cast<int>(r.history.size());
    bool ok = halted == s.plateau + s.patience &&
              loaded.metadata.best_epoch == s.expected_best &&
              halted == static_cast<int>(snapshots.size());
    if (ok) {
      Network expected = snapshots[s.expected_best - 1];
      expected.RoundToFloat();
      ok = loaded.network == expected;
    }
    pass &= ok;
    detail += (detail.empty() ? "" : "; ") +
              Fmt("e=%.0f p=%.0f halted %.0f best %.0f", s.plateau, s.patience,
                  halted, loaded.metadata.best_epoch);
  }
  return {pass, detail};
}

std::string DirDigest(const fs::path &dir) {
  std::map<std::string, std::string> files;
  for (const auto &e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) {
      files[fs::relative(e.path(), dir).string()] =
          testing::ReadFile(e.path().string());
    }
  }
  std::string out;
  for (const auto &[name, bytes] : files) out += name + '\0' + bytes + '\0';
  return out;
}

Outcome Determinism(const fs::path &first, const fs::path &second) {
  RunDeskPipeline(second);
  bool pass = true;
  std::string detail;
  for (const char *name :
       {"corpus.jsonl", "sample.jsonl", "model.b2am", "history.csv"}) {
    const bool same = testing::ReadFile((first / name).string()) ==
                      testing::ReadFile((second / name).string());
    pass &= same;
    if (!same) detail += std::string(detail.empty() ? "" : ", ") + name;
  }
  const bool splits_same =
      DirDigest(first / "splits") == DirDigest(second / "splits");
  pass &= splits_same;
  if (!splits_same) detail += std::string(detail.empty() ? "" : ", ") + "splits";
  return {pass, pass ? "corpus, sample, splits, model and history identical"
                     : "differs: " + detail};
}

std::vector<std::string> ReadLines(const std::string &path) {
  std::ifstream in(path);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

Outcome EmbeddingSimilarity() {
  BuiltinEmbedder provider(EmbedderConfig{});
  auto cos = [&](const std::string &a, const std::string &b) {
    return CosineSimilarity(provider.EmbedName(a), provider.EmbedName(b));
  };
  const double near = cos("Ponsard", "Pinsard");
  const double far = cos("Ponsard", "Ramdoyal");

  const auto names =
      ReadLines(std::string(BIB2AUTH_TEST_DATA) + "/names200.txt");
  if (names.size() != 200) return {false, "names200.txt must hold 200 names"};
  // Single edit: substitute one letter of the surname.
  double edit_sum = 0;
  for (size_t i = 0; i < names.size(); ++i) {
    std::string edited = names[i];
    const size_t space = edited.rfind(' ');
    const size_t len = edited.size() - space - 1;
    const size_t pos = space + 1 + (1 + i % (len - 1));
    edited[pos] = edited[pos] == 'x' ? 'q' : 'x';
    edit_sum += cos(names[i], edited);
  }
  double random_sum = 0;
  Rng rng(99);
  for (size_t i = 0; i < names.size(); ++i) {
    size_t j = i;
    while (j == i) j = rng.Below(names.size());
    random_sum += cos(names[i], names[j]);
  }
  const double edit_mean = edit_sum / names.size();
  const double random_mean = random_sum / names.size();
  return {near > far && edit_mean - random_mean >= 0.2,
          Fmt("Ponsard/Pinsard %.3f vs Ponsard/Ramdoyal %.3f, ", near, far) +
              Fmt("single-edit mean %.3f vs random mean %.3f", edit_mean,
                  random_mean)};
}

Outcome Persistence(const fs::path &dir) {
  TrainedModel m;
  m.embedder.name_dim = 16;
  m.embedder.content_dim = 24;
  m.vocabulary =
      EntityVocabulary::FromIds({"Ann Lee", "Bo Chen", "Cy Diaz", "Di Wu"});
  NetworkTopology t = DefaultTopology(m.embedder, 4);
  t.branch1_hidden = 12;
  t.branch2_hidden = 8;
  t.trunk_hidden = {10, 6};
  m.network = Network(t);
  m.network.InitializeWeights(31);
  m.network.RoundToFloat();
  const std::string path = (dir / "persist.b2am").string();
  SaveModel(m, path);
  const TrainedModel back = LoadModel(path);
  Rng rng(8);
  int exact = 0;
  for (int i = 0; i < 100; ++i) {
    const Eigen::MatrixXd x1 = testing::RandomMatrix(rng, 40, 1);
    const Eigen::MatrixXd x2 = testing::RandomMatrix(rng, 16, 1);
    const Eigen::MatrixXd a = m.network.Forward(x1, x2);
    const Eigen::MatrixXd b = back.network.Forward(x1, x2);
    exact += std::memcmp(a.data(), b.data(), sizeof(double) * a.size()) == 0;
  }
  const std::string bytes = testing::ReadFile(path);
  auto error_of = [](const std::string &data) -> std::string {
    try {
      DeserializeModel(data);
    } catch (const ModelFormatError &e) {
      return e.what();
    }
    return "";
  };
  std::string flipped = bytes;
  flipped[bytes.size() / 2] ^= 0x10;
  std::string bumped = bytes;
  const uint32_t next = kModelFormatVersion + 1;
  std::memcpy(bumped.data() + 4, &next, 4);
  const bool corrupt =
      error_of(flipped).find("checksum mismatch") != std::string::npos;
  const bool truncated =
      error_of(bytes.substr(0, bytes.size() - 9)).find("unexpected end") !=
      std::string::npos;
  const bool version =
      error_of(bumped).find("unsupported model format version") !=
      std::string::npos;
  return {exact == 100 && corrupt && truncated && version,
          std::to_string(exact) + "/100 bit-exact, corrupted " +
              (corrupt ? "rejected" : "ACCEPTED") + ", truncated " +
              (truncated ? "rejected" : "ACCEPTED") + ", version bump " +
              (version ? "rejected" : "ACCEPTED")};
}

long StatusKb(const char *field) {
  std::ifstream in("/proc/self/status");
  for (std::string line; std::getline(in, line);) {
    if (line.rfind(field, 0) == 0) return std::stol(line.substr(std::strlen(field)));
  }
  return -1;
}

Outcome StreamingBound(const fs::path &dir) {
  const std::string path = (dir / "large.xml").string();
  {
    std::ofstream out(path, std::ios::binary);
    WriteLargeDblpXml(out, 100u << 20);
  }
  const double megabytes = fs::file_size(path) / 1e6;
  // Reset the peak-RSS counter so only the parse is measured.
  bool reset = false;
  {
    std::ofstream clear("/proc/self/clear_refs");
    clear << "5";
    clear.flush();
    reset = static_cast<bool>(clear);
  }
  const long baseline = StatusKb("VmRSS:");
  const long hwm_before = StatusKb("VmHWM:");
  std::ifstream in(path, std::ios::binary);
  uint64_t records = 0;
  const IngestStats stats =
      ParseDblpXml(in, [&](BibRecord &&) { ++records; });
  const long peak = StatusKb("VmHWM:");
  fs::remove(path);
  if (baseline < 0 || peak < 0) return {false, "cannot read /proc/self/status"};
  // Without a reset the earlier peak may mask the parse; measure against it.
  const long reference = reset ? baseline : std::max(baseline, hwm_before);
  const double extra_mib = (peak - reference) / 1024.0;
  return {records == stats.ingested && records > 0 && extra_mib < 32,
          Fmt("%.1f MB parsed, %.0f records, peak additional memory %.2f MiB",
              megabytes, static_cast<double>(records), extra_mib) +
              (reset ? "" : " (peak counter not resettable)")};
}

int Run() {
  testing::TempDir tmp;
  const fs::path run1 = tmp.path() / "run1";
  const fs::path run2 = tmp.path() / "run2";
  fs::create_directories(run1);
  fs::create_directories(run2);

  std::vector<std::pair<std::string, Outcome>> results(10);
  auto guarded = [](const std::function<Outcome()> &f) {
    try {
      return f();
    } catch (const std::exception &e) {
      return Outcome{false, std::string("exception: ") + e.what()};
    }
  };
  // The streaming check runs first, before training grows the heap.
  std::cerr << "running streaming bound...\n";
  results[9] = {"streaming bound", guarded([&] { return StreamingBound(tmp.path()); })};
  std::cerr << "running gradient check...\n";
  results[0] = {"gradient correctness", guarded(GradientCorrectness)};
  results[1] = {"metrics oracle", guarded(MetricsOracle)};
  std::cerr << "running desk-scale pipeline...\n";
  DeskOutcome desk;
  try {
    desk = DeskScale(run1);
  } catch (const std::exception &e) {
    desk.end_to_end = {false, std::string("exception: ") + e.what()};
    desk.trend = desk.end_to_end;
  }
  results[2] = {"desk-scale end-to-end", desk.end_to_end};
  results[3] = {"full-name trend", desk.trend};
  std::cerr << "running split invariants...\n";
  results[4] = {"split invariants", guarded(SplitInvariants)};
  results[5] = {"early stopping and checkpoint",
                guarded([&] { return EarlyStoppingAndCheckpoint(tmp.path()); })};
  std::cerr << "running determinism (second pipeline run)...\n";
  results[6] = {"determinism", guarded([&] { return Determinism(run1, run2); })};
  results[7] = {"embedding similarity", guarded(EmbeddingSimilarity)};
  results[8] = {"model persistence",
                guarded([&] { return Persistence(tmp.path()); })};

  int failed = 0;
  for (size_t i = 0; i < results.size(); ++i) {
    const auto &[name, o] = results[i];
    failed += !o.pass;
    std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", i + 1,
                name.c_str(), o.detail.c_str());
  }
  std::printf("%d/10 criteria passed\n", 10 - failed);
  return failed == 0 ? 0 : 1;
}

}  // namespace
}  // namespace bib2auth

int main() { return bib2auth::Run(); }
