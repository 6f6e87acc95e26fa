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

// Command-line front end: bib2auth <ingest|sample|prepare|train|eval|predict|serve>.
//
// Exit codes: 0 success, 1 operational error, 2 usage or configuration error.

#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "bib2auth/config.h"
#include "bib2auth/evaluation.h"
#include "bib2auth/pipeline.h"
#include "bib2auth/service.h"

namespace bib2auth {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUsage = 2;

struct Flags {
  std::string config_path;
  std::optional<uint64_t> seed;

  // ingest
  std::optional<std::string> xml, corpus_out;
  bool expand_venues = false;
  bool expand_booktitles = false;
  std::optional<std::string> venue_url, venue_cache;

  // sample
  std::optional<std::string> corpus_in, sample_out;
  std::optional<double> coverage;
  std::optional<size_t> max_records;

  // prepare
  std::optional<std::string> sample_in, splits_out;
  std::optional<std::string> variant_policy;

  // train
  std::optional<std::string> splits, model, history;
  std::optional<int> max_epochs, patience, batch_size;
  std::optional<double> learning_rate;
  std::optional<std::string> embedder_url;
  bool quiet = false;

  // eval
  std::string split = "test";
  std::string slice = "all";
  bool json = false;

  // predict
  std::string author, coauthor, title, source;
  std::optional<double> threshold;
  std::optional<int> top_k;

  // serve
  std::string host = "127.0.0.1";
  int port = 8080;
};

// Missing inputs are a usage problem, reported before any work starts.
void RequireInput(const std::string &path) {
  if (!std::filesystem::exists(path)) {
    throw ConfigError("input not found: " + path);
  }
}

PipelineConfig ResolveConfig(const Flags &f) {
  std::string path = f.config_path;
  if (path.empty()) {
    if (const char *env = std::getenv("BIB2AUTH_CONFIG"); env && *env) {
      path = env;
    }
  }
  PipelineConfig c = path.empty() ? PipelineConfig{} : LoadConfigFile(path);
  if (f.seed) c.SetSeed(*f.seed);

  if (f.xml) c.paths.dblp_xml = *f.xml;
  if (f.corpus_out) c.paths.corpus = *f.corpus_out;
  if (f.expand_venues) c.venues.expand = true;
  if (f.expand_booktitles) c.venues.expand_booktitles = true;
  if (f.venue_url) c.venues.client.base_url = *f.venue_url;
  if (f.venue_cache) c.paths.venue_cache = *f.venue_cache;

  if (f.corpus_in) c.paths.corpus = *f.corpus_in;
  if (f.sample_out) c.paths.sample = *f.sample_out;
  if (f.coverage) c.sampling.coverage = *f.coverage;
  if (f.max_records) c.sampling.max_records = *f.max_records;

  if (f.sample_in) c.paths.sample = *f.sample_in;
  if (f.splits_out) c.paths.splits_dir = *f.splits_out;
  if (f.variant_policy) c.variant_policy = VariantPolicy::Parse(*f.variant_policy);

  if (f.splits) c.paths.splits_dir = *f.splits;
  if (f.model) c.paths.model = *f.model;
  if (f.history) c.paths.history = *f.history;
  if (f.max_epochs) c.train.max_epochs = *f.max_epochs;
  if (f.patience) c.train.patience = *f.patience;
  if (f.batch_size) c.train.batch_size = *f.batch_size;
  if (f.learning_rate) c.train.adam.learning_rate = *f.learning_rate;
  if (f.embedder_url) {
    c.embedder.provider = EmbedderConfig::Provider::kRemote;
    c.embedder.remote_url = *f.embedder_url;
  }

  if (f.threshold) c.threshold = *f.threshold;
  if (f.top_k) c.top_k = *f.top_k;
  c.Validate();
  return c;
}

void PrintWarning(const std::string &message) {
  std::cerr << "warning: " << message << "\n";
}

int CmdIngest(const PipelineConfig &c) {
  RequireInput(c.paths.dblp_xml);
  VenueCache cache(c.paths.venue_cache);
  std::optional<HttpVenueClient> client;
  if (c.venues.expand) {
    cache.Load();
    client.emplace(c.venues.client);
  }
  const IngestSummary summary =
      RunIngest(c.paths.dblp_xml, c.paths.corpus, c.venues, &cache,
                client ? &*client : nullptr, PrintWarning);
  const IngestStats &s = summary.stats;
  std::cout << s.ingested << " ingested, " << s.skipped_total()
            << " skipped\n";
  for (const auto &[kind, n] : s.ingested_by_kind) {
    std::cout << "  " << kind << ": " << n << "\n";
  }
  for (const auto &[kind, n] : s.skipped_by_kind) {
    std::cout << "  skipped " << kind << ": " << n << "\n";
  }
  if (s.skipped_invalid > 0) {
    std::cout << "  skipped incomplete: " << s.skipped_invalid << "\n";
  }
  if (c.venues.expand) {
    std::cout << "  sources expanded: " << summary.sources_expanded << "\n";
  }
  std::cout << "wrote " << c.paths.corpus << "\n";
  return kExitOk;
}

int CmdSample(const PipelineConfig &c) {
  RequireInput(c.paths.corpus);
  const SampleResult r = RunSample(c.paths.corpus, c.paths.sample, c.sampling);
  const SamplingReport &rep = r.report;
  std::cout << rep.selected_record_count << " records selected, "
            << rep.selected_author_count << " authors ("
            << rep.coverage.size() << " covered, "
            << rep.passenger_author_count << " below coverage) after "
            << rep.iterations << " iterations\n";
  std::cout << "wrote " << c.paths.sample << "\n";
  return kExitOk;
}

int CmdPrepare(const PipelineConfig &c) {
  RequireInput(c.paths.sample);
  const DatasetSplit split = RunPrepare(c.paths.sample, c.paths.splits_dir,
                                        c.fractions, c.split_seed,
                                        c.variant_policy);
  const SplitStats &s = split.stats;
  std::printf("classes: %d\n", split.vocabulary.size());
  std::printf("train:      %8zu samples (%5.1f%%) from %zu records\n",
              split.train.size(), 100 * s.train_fraction, s.train_records);
  std::printf("validation: %8zu samples (%5.1f%%) from %zu records\n",
              split.validation.size(), 100 * s.validation_fraction,
              s.validation_records);
  std::printf("test:       %8zu samples (%5.1f%%) from %zu records\n",
              split.test.size(), 100 * s.test_fraction, s.test_records);
  std::printf("unused records: %zu\n", s.unused_records);
  std::cout << "wrote " << c.paths.splits_dir << "\n";
  return kExitOk;
}

int CmdTrain(const PipelineConfig &c, bool quiet) {
  RequireInput(c.paths.splits_dir);
  auto provider = MakeEmbeddingProvider(c.embedder);
  TrainOptions options;
  if (!quiet) {
    options.on_epoch = [](const EpochStats &e, const Network &) {
      std::printf("epoch %d  train_loss %.6f  val_loss %.6f  val_acc %.4f\n",
                  e.epoch, e.train_loss, e.val_loss, e.val_accuracy);
      std::fflush(stdout);
    };
  }
  const TrainResult r = RunTrain(c.paths.splits_dir, c.paths.model,
                                 c.paths.history, c, *provider, options);
  const TrainingMetadata &m = r.model.metadata;
  std::printf("epochs run: %d, best epoch: %d, best val accuracy: %.4f\n",
              m.epochs_run, m.best_epoch, m.best_val_accuracy);
  std::cout << "wrote " << c.paths.model << " and " << c.paths.history << "\n";
  return kExitOk;
}

std::unique_ptr<EmbeddingProvider> ProviderForModel(
    const TrainedModel &model, const std::optional<std::string> &url) {
  EmbedderConfig cfg = model.embedder;
  if (url) {
    cfg.provider = EmbedderConfig::Provider::kRemote;
    cfg.remote_url = *url;
  }
  return MakeEmbeddingProvider(cfg);
}

int CmdEval(const PipelineConfig &c, const Flags &f) {
  RequireInput(c.paths.model);
  RequireInput(c.paths.splits_dir);
  if (f.slice != "all" && f.slice != "full-name" && f.slice != "both") {
    throw ConfigError("--slice must be all, full-name or both");
  }
  const TrainedModel model = LoadModel(c.paths.model);
  const DatasetSplit split = ReadSplitDir(c.paths.splits_dir);
  CheckModelMatchesSplit(model, split);
  const std::vector<TrainingSample> &samples = SplitSamples(split, f.split);
  auto provider = ProviderForModel(model, f.embedder_url);

  std::vector<EvalReport> reports;
  if (f.slice == "both") {
    auto [all, full] = CompareSlices(model, *provider, samples, c.threshold);
    reports = {std::move(all), std::move(full)};
  } else {
    const EvalSlice slice = f.slice == "all" ? EvalSlice::kAllVariants
                                             : EvalSlice::kFullNameOnly;
    reports.push_back(Evaluate(model, *provider, samples, slice, c.threshold));
  }
  for (const EvalReport &r : reports) {
    std::cout << (f.json ? ReportToJson(r) + "\n" : FormatReportTable(r));
  }
  return kExitOk;
}

int CmdPredict(const PipelineConfig &c, const Flags &f) {
  RequireInput(c.paths.model);
  const TrainedModel model = LoadModel(c.paths.model);
  auto provider = ProviderForModel(model, f.embedder_url);
  const PredictionResult r = PredictAuthor(model, *provider, f.author,
                                           f.coauthor, f.title, f.source,
                                           c.top_k, c.threshold);
  if (r.unknown) std::cout << "UNKNOWN\n";
  for (size_t i = 0; i < r.top.size(); ++i) {
    std::printf("%zu\t%.6f\t%s\n", i + 1, r.top[i].probability,
                r.top[i].entity.c_str());
  }
  return kExitOk;
}

int CmdServe(const PipelineConfig &c, const Flags &f) {
  RequireInput(c.paths.model);
  const TrainedModel model = LoadModel(c.paths.model);
  auto provider = ProviderForModel(model, f.embedder_url);
  PredictionService service(model, *provider, c.top_k);

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  const int port = service.Bind(f.host, f.port);
  std::cout << "listening on " << f.host << ":" << port << " ("
            << model.vocabulary.size() << " classes)" << std::endl;
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    service.Stop();
  });
  service.Run();
  // Run() may also end without a signal; wake the waiter so it can exit.
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  return kExitOk;
}

int Main(int argc, char **argv) {
  Flags f;
  CLI::App app{"Links author name mentions in bibliographic records to "
               "author entities."};
  app.name("bib2auth");
  app.require_subcommand(1);
  app.add_option("--config", f.config_path,
                 "Pipeline config (JSON); defaults to $BIB2AUTH_CONFIG");
  app.add_option("--seed", f.seed, "Seed for sampling, splitting and training");

  CLI::App *ingest = app.add_subcommand("ingest", "DBLP XML to corpus");
  ingest->add_option("--xml", f.xml, "DBLP XML input");
  ingest->add_option("--out", f.corpus_out, "Corpus output (JSON lines)");
  ingest->add_flag("--expand-venues", f.expand_venues,
                   "Expand journal abbreviations via the venue service");
  ingest->add_flag("--expand-booktitles", f.expand_booktitles,
                   "Also expand inproceedings booktitles");
  ingest->add_option("--venue-url", f.venue_url, "Venue search endpoint");
  ingest->add_option("--venue-cache", f.venue_cache, "Venue cache file");

  CLI::App *sample = app.add_subcommand("sample", "Coverage-based sampling");
  sample->add_option("--in", f.corpus_in, "Corpus input");
  sample->add_option("--out", f.sample_out, "Sampled corpus output");
  sample->add_option("--coverage", f.coverage, "Per-author coverage threshold");
  sample->add_option("--max-records", f.max_records, "Seed selection size");

  CLI::App *prepare =
      app.add_subcommand("prepare", "Samples and train/validation/test split");
  prepare->add_option("--in", f.sample_in, "Sampled corpus input");
  prepare->add_option("--out", f.splits_out, "Split directory");
  prepare->add_option("--variant-policy", f.variant_policy,
                      "all, full-only or capped:<n>");

  CLI::App *train = app.add_subcommand("train", "Train the classifier");
  train->add_option("--splits", f.splits, "Split directory");
  train->add_option("--model", f.model, "Model output");
  train->add_option("--history", f.history, "Per-epoch history CSV output");
  train->add_option("--max-epochs", f.max_epochs);
  train->add_option("--patience", f.patience);
  train->add_option("--batch-size", f.batch_size);
  train->add_option("--learning-rate", f.learning_rate);
  train->add_option("--embedder-url", f.embedder_url,
                    "Use a remote embedding service");
  train->add_flag("--quiet", f.quiet, "No per-epoch progress");

  CLI::App *eval = app.add_subcommand("eval", "Evaluate a model on a split");
  eval->add_option("--model", f.model, "Model file");
  eval->add_option("--splits", f.splits, "Split directory");
  eval->add_option("--split", f.split, "train, validation or test")
      ->capture_default_str();
  eval->add_option("--slice", f.slice, "all, full-name or both")
      ->capture_default_str();
  eval->add_option("--threshold", f.threshold, "Unknown-author threshold");
  eval->add_option("--embedder-url", f.embedder_url);
  eval->add_flag("--json", f.json, "Machine-readable report");

  CLI::App *predict = app.add_subcommand("predict", "Rank entities for a mention");
  predict->add_option("--model", f.model, "Model file");
  predict->add_option("--author", f.author, "Target author name")->required();
  predict->add_option("--coauthor", f.coauthor, "Co-author name")->required();
  predict->add_option("--title", f.title, "Publication title")->required();
  predict->add_option("--source", f.source, "Journal or book title");
  predict->add_option("--threshold", f.threshold, "Unknown-author threshold");
  predict->add_option("--top-k", f.top_k);
  predict->add_option("--embedder-url", f.embedder_url);

  CLI::App *serve = app.add_subcommand("serve", "HTTP prediction endpoint");
  serve->add_option("--model", f.model, "Model file");
  serve->add_option("--host", f.host)->capture_default_str();
  serve->add_option("--port", f.port)->capture_default_str();
  serve->add_option("--embedder-url", f.embedder_url);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const PipelineConfig c = ResolveConfig(f);
    if (ingest->parsed()) return CmdIngest(c);
    if (sample->parsed()) return CmdSample(c);
    if (prepare->parsed()) return CmdPrepare(c);
    if (train->parsed()) return CmdTrain(c, f.quiet);
    if (eval->parsed()) return CmdEval(c, f);
    if (predict->parsed()) return CmdPredict(c, f);
    if (serve->parsed()) return CmdServe(c, f);
  } catch (const ConfigError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvalidInputError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitUsage;
}

}  // namespace
}  // namespace bib2auth

int main(int argc, char **argv) { return bib2auth::Main(argc, argv); }
