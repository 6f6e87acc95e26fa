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

// Writes the deterministic synthetic DBLP-style corpus used by the tests.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "bib2auth/synthetic.h"

int main(int argc, char **argv) {
  bib2auth::SyntheticCorpusConfig config;
  std::string out;
  size_t large_bytes = 0;
  CLI::App app{"Synthetic DBLP-style XML generator"};
  app.name("bib2auth_synth");
  app.add_option("--out", out, "Output XML file")->required();
  app.add_option("--records", config.records)->capture_default_str();
  app.add_option("--entities", config.entities)->capture_default_str();
  app.add_option("--homonym-pairs", config.homonym_pairs)->capture_default_str();
  app.add_option("--seed", config.seed)->capture_default_str();
  app.add_option("--large-bytes", large_bytes,
                 "Instead write a repeated-record file of at least this size");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  try {
    std::ofstream file(out, std::ios::binary | std::ios::trunc);
    if (!file) throw bib2auth::Error("cannot write " + out);
    if (large_bytes > 0) {
      bib2auth::WriteLargeDblpXml(file, large_bytes);
    } else {
      bib2auth::WriteDblpXml(file, bib2auth::GenerateSyntheticCorpus(config));
    }
    file.flush();
    if (!file) throw bib2auth::Error("failed writing " + out);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
