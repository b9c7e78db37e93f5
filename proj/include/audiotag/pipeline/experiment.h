// pipeline/experiment.h

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

#ifndef AUDIOTAG_PIPELINE_EXPERIMENT_H_
#define AUDIOTAG_PIPELINE_EXPERIMENT_H_

#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "audiotag/eval/report.h"
#include "audiotag/io/chunk-list.h"
#include "audiotag/pipeline/experiment-config.h"

namespace audiotag {

// Runs `body`; an audiotag::Error escaping it is rethrown with the same
// exit code and "<stage>: " prepended.
void RunStage(const std::string &stage, const std::function<void()> &body);

// "fold<k>" for development folds, "eval" for the held-out set.
std::string FoldLabel(int fold);
// Master seed of everything trained for one fold: DeriveSeed(config.seed,
// "fold-" + FoldLabel(fold)).  Families derive their own stage seeds from it
// ("tagger", "dae", "gmm", "misvm", "chunksvm").
uint64_t FoldSeed(const ExperimentConfig &config, int fold);

// Front-end features of every record, read from audio.
std::vector<FeatureMatrix> ExtractRecords(std::span<const ChunkRecord> records,
                                          FeatureKind kind);

// chunk_id,score_b,...,score_v with 17 significant digits.
void WriteScoresCsv(std::ostream &os, std::span<const ChunkScore> rows);
void WriteScoresCsv(const std::string &path, std::span<const ChunkScore> rows);
std::vector<ChunkScore> ReadScoresCsv(const std::string &path);

// Pairs scores with the labels of `chunks`.  DataError for a chunk that is
// unknown or unlabeled.
ScoredSet JoinScores(std::span<const ChunkScore> scores,
                     const ChunkList &chunks);

// A trained system of any family, scoring chunks from front-end features.
class TagScorer {
 public:
  virtual ~TagScorer() = default;
  virtual ModelFamily Family() const = 0;
  virtual FeatureKind FrontEnd() const = 0;
  virtual Vector Score(const FeatureMatrix &frontend) const = 0;
  // Writes the model file(s) to `<stem>.model` (and `<stem>.dae.model` for
  // dae+dnn); returns the paths written.
  virtual std::vector<std::string> Save(const std::string &stem) const = 0;
};

// Trains the configured family on one training set.  `seed` is the fold's
// stage seed.
std::unique_ptr<TagScorer> TrainScorer(const ExperimentConfig &config,
                                       std::span<const FeatureMatrix> train,
                                       std::span<const TagSet> tags,
                                       uint64_t seed);

// Loads a model file written by TagScorer::Save.  A tagger over DAE codes
// needs the matching autoencoder in `dae_path`.
std::unique_ptr<TagScorer> LoadScorer(const std::string &model_path,
                                      const std::string &dae_path = "");

// Records the config hash, seed and SHA-256 of every listed file (paths
// relative to `output_dir`), sorted by path, without timestamps.
void WriteManifest(const ExperimentConfig &config,
                   const std::vector<std::string> &relative_files);

struct RunResult {
  EvalReport summary;
  std::vector<std::string> files;  // relative to the output directory
};

// For each selected fold: train on the fold's training set, score its test
// set, evaluate.  Writes
//   models/<fold>.model, scores/<fold>.csv, reports/<fold>.csv,
//   roc/<fold>-<tag>.csv, reports/summary.{csv,md}, config.json,
//   manifest.json
// under config.output_dir.
RunResult RunExperiment(const ExperimentConfig &config);

}  // namespace audiotag

#endif  // AUDIOTAG_PIPELINE_EXPERIMENT_H_
