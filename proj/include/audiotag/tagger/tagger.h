// tagger/tagger.h

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

#ifndef AUDIOTAG_TAGGER_TAGGER_H_
#define AUDIOTAG_TAGGER_TAGGER_H_

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "audiotag/feat/context-window.h"
#include "audiotag/feat/norm-stats.h"
#include "audiotag/io/tag-set.h"
#include "audiotag/nnet/mlp-train.h"

namespace audiotag {

// How window posteriors are pooled into one chunk score.
enum class ChunkAggregation { kMean, kMax };

std::string ChunkAggregationName(ChunkAggregation a);
ChunkAggregation ParseChunkAggregation(const std::string &name);

struct TaggerConfig {
  FeatureKind features = FeatureKind::kMbk40;
  // tau = 45 and T = 6.  context.stride is the stride at prediction time.
  ContextOptions context;
  // Window stride while training; 1 uses every window.
  int train_stride = 1;
  // Widths of the relu hidden layers, strictly decreasing.
  std::vector<Eigen::Index> hidden = {1000, 500};
  Real input_dropout = 0.1;
  Real hidden_dropout = 0.2;
  LossKind loss = LossKind::kBce;
  TrainingOptions training;  // 0.005 / 0.9 / 100, early stopping 100 / 10
  // Fraction of training chunks held out for early stopping.
  Real validation_fraction = 0.1;
  ChunkAggregation aggregation = ChunkAggregation::kMean;
  uint64_t seed = 0;

  // ConfigError on an empty or non-shrinking hidden stack, bad rates or
  // strides.
  void Validate() const;
};

nlohmann::json TaggerConfigToJson(const TaggerConfig &c);
TaggerConfig TaggerConfigFromJson(const nlohmann::json &j);

// Network layout for a given input dimension: relu hidden layers and a
// 7-unit sigmoid output.  Input dropout sits on the first layer, hidden
// dropout on every later one.
std::vector<LayerSpec> TaggerLayerSpecs(const TaggerConfig &c);

struct ChunkScore {
  std::string chunk_id;
  Vector posteriors;  // kNumTags entries in [0, 1]
};

// A trained tagger together with what is needed to apply it to raw
// features.
struct Tagger {
  TaggerConfig config;
  NormStats norm;
  MlpModel net;
  TrainingHistory history;

  void Save(const std::string &path) const;
  static Tagger Load(const std::string &path);
};

// Windows of a set of normalized chunks, produced on demand.  Each window
// carries its chunk's full tag vector as target.
class ContextWindowDataset : public BatchSource {
 public:
  // `chunks` and `tags` must outlive the dataset.
  ContextWindowDataset(std::span<const FeatureMatrix> chunks,
                       std::span<const TagSet> tags, const ContextOptions &opts,
                       int stride, std::span<const size_t> chunk_subset = {});

  size_t Size() const override { return windows_.size(); }
  Eigen::Index InputDim() const override { return dim_; }
  Eigen::Index TargetDim() const override { return kNumTags; }
  void Fill(std::span<const size_t> indices, Matrix *inputs,
            Matrix *targets) const override;

 private:
  struct Window {
    size_t chunk;
    Eigen::Index center;
  };
  std::span<const FeatureMatrix> chunks_;
  std::span<const TagSet> tags_;
  ContextOptions opts_;
  Eigen::Index dim_ = 0;
  std::vector<RowVector> noise_;
  std::vector<Window> windows_;
};

// `train` holds unnormalized feature matrices of one kind; `norm` is fitted
// on them by the caller.  A deterministic slice of
// config.validation_fraction of the chunks drives early stopping.
Tagger TrainTagger(std::span<const FeatureMatrix> train,
                   std::span<const TagSet> tags, const TaggerConfig &config,
                   const NormStats &norm);

// Pools a kNumTags x W matrix of window outputs.
Vector AggregateWindows(const Matrix &window_outputs, ChunkAggregation a);

// Scores one chunk from its raw features (or features already normalized
// with the tagger's stats).  ShapeError on a dimension mismatch.
ChunkScore PredictChunk(const Tagger &tagger, const FeatureMatrix &features);

// Tag k is present iff posterior_k > threshold.
TagSet DecideTags(const ChunkScore &score, Real threshold = 0.4);

}  // namespace audiotag

#endif  // AUDIOTAG_TAGGER_TAGGER_H_
