// testing/make-synthetic-corpus.cc

// Copyright 2026  audiotag authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// Writes a synthetic tagged corpus for trying out the tools.

#include <iostream>

#include <CLI11.hpp>

#include "synthetic-corpus.h"

int main(int argc, char *argv[]) {
  CLI::App app{"Write a synthetic 7-tag corpus (chunks.csv + audio/)"};
  std::string root;
  audiotag::testing::SyntheticCorpusOptions opts;
  app.add_option("root", root, "output directory")->required();
  app.add_option("--chunks", opts.num_chunks, "development chunks")
      ->capture_default_str();
  app.add_option("--weak", opts.num_weak, "chunks with no fold")
      ->capture_default_str();
  app.add_option("--eval", opts.num_eval, "evaluation chunks")
      ->capture_default_str();
  app.add_option("--seed", opts.seed, "seed")->capture_default_str();
  CLI11_PARSE(app, argc, argv);
  try {
    auto c = audiotag::testing::WriteSyntheticCorpus(root, opts);
    std::cout << c.chunk_list << "\n";
  } catch (const std::exception &e) {
    std::cerr << e.what() << "\n";
    return 3;
  }
  return 0;
}
