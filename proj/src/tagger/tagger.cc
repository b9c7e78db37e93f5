// tagger/tagger.cc

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

#include "audiotag/tagger/tagger.h"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

#include <spdlog/spdlog.h>

#include "audiotag/nnet/model-io.h"

namespace audiotag {

std::string ChunkAggregationName(ChunkAggregation a) {
  return a == ChunkAggregation::kMean ? "mean" : "max";
}

ChunkAggregation ParseChunkAggregation(const std::string &name) {
  if (name == "mean") return ChunkAggregation::kMean;
  if (name == "max") return ChunkAggregation::kMax;
  throw ConfigError("unknown chunk aggregation '" + name + "'");
}

void TaggerConfig::Validate() const {
  context.Validate();
  if (hidden.empty()) throw ConfigError("tagger needs at least one hidden layer");
  for (size_t i = 0; i < hidden.size(); i++) {
    if (hidden[i] < 1) throw ConfigError("hidden layer with no units");
    if (i > 0 && hidden[i] >= hidden[i - 1])
      throw ConfigError("hidden layer widths must strictly decrease");
  }
  for (Real r : {input_dropout, hidden_dropout})
    if (!(r >= 0.0 && r < 1.0))
      throw ConfigError("dropout rates must lie in [0, 1)");
  if (train_stride < 1) throw ConfigError("training stride must be >= 1");
  if (!(validation_fraction >= 0.0 && validation_fraction < 1.0))
    throw ConfigError("validation fraction must lie in [0, 1)");
  if (training.batch_size < 1 || training.max_epochs < 0 ||
      training.patience < 0 || !(training.learning_rate > 0.0) ||
      !(training.momentum >= 0.0 && training.momentum < 1.0))
    throw ConfigError("invalid tagger training options");
}

nlohmann::json TaggerConfigToJson(const TaggerConfig &c) {
  return {{"features", FeatureKindName(c.features)},
          {"tau", c.context.tau},
          {"noise_frames", c.context.noise_frames},
          {"append_noise", c.context.append_noise},
          {"stride", c.context.stride},
          {"dilation", c.context.dilation},
          {"train_stride", c.train_stride},
          {"hidden", c.hidden},
          {"input_dropout", c.input_dropout},
          {"hidden_dropout", c.hidden_dropout},
          {"loss", LossKindName(c.loss)},
          {"training", TrainingOptionsToJson(c.training)},
          {"validation_fraction", c.validation_fraction},
          {"aggregation", ChunkAggregationName(c.aggregation)},
          {"seed", c.seed}};
}

TaggerConfig TaggerConfigFromJson(const nlohmann::json &j) {
  TaggerConfig c;
  try {
    c.features = ParseFeatureKind(j.at("features").get<std::string>());
    c.context.tau = j.at("tau").get<int>();
    c.context.noise_frames = j.at("noise_frames").get<int>();
    c.context.append_noise = j.at("append_noise").get<bool>();
    c.context.stride = j.at("stride").get<int>();
    c.context.dilation = j.at("dilation").get<int>();
    c.train_stride = j.at("train_stride").get<int>();
    c.hidden = j.at("hidden").get<std::vector<Eigen::Index>>();
    c.input_dropout = j.at("input_dropout").get<Real>();
    c.hidden_dropout = j.at("hidden_dropout").get<Real>();
    c.loss = ParseLossKind(j.at("loss").get<std::string>());
    c.training = TrainingOptionsFromJson(j.at("training"));
    c.validation_fraction = j.at("validation_fraction").get<Real>();
    c.aggregation = ParseChunkAggregation(j.at("aggregation").get<std::string>());
    c.seed = j.at("seed").get<uint64_t>();
  } catch (const nlohmann::json::exception &e) {
    throw DataError(std::string("bad tagger configuration: ") + e.what());
  }
  return c;
}

std::vector<LayerSpec> TaggerLayerSpecs(const TaggerConfig &c) {
  std::vector<LayerSpec> specs;
  for (size_t i = 0; i < c.hidden.size(); i++)
    specs.push_back({c.hidden[i], Activation::kRelu,
                     i == 0 ? c.input_dropout : c.hidden_dropout});
  specs.push_back({kNumTags, Activation::kSigmoid, c.hidden_dropout});
  return specs;
}

void Tagger::Save(const std::string &path) const {
  ModelArchive ar("dnn-tagger");
  ar.meta()["config"] = TaggerConfigToJson(config);
  nlohmann::json curve = nlohmann::json::array();
  for (const auto &e : history.epochs)
    curve.push_back({e.epoch, e.train_loss,
                     std::isnan(e.valid_loss) ? nlohmann::json(nullptr)
                                              : nlohmann::json(e.valid_loss)});
  ar.meta()["history"] = {{"best_epoch", history.best_epoch},
                          {"stopped_early", history.stopped_early},
                          {"epochs", curve}};
  PutNormStats(&ar, "norm", norm);
  PutMlp(&ar, "net", net);
  ar.Write(path);
}

Tagger Tagger::Load(const std::string &path) {
  ModelArchive ar = ModelArchive::Read(path, "dnn-tagger");
  Tagger t;
  t.config = TaggerConfigFromJson(ar.meta()["config"]);
  t.norm = GetNormStats(ar, "norm");
  t.net = GetMlp(ar, "net");
  if (ar.meta().contains("history")) {
    const auto &h = ar.meta()["history"];
    t.history.best_epoch = h.value("best_epoch", 0);
    t.history.stopped_early = h.value("stopped_early", false);
    for (const auto &e : h["epochs"]) {
      EpochRecord r;
      r.epoch = e[0].get<int>();
      r.train_loss = e[1].get<Real>();
      if (!e[2].is_null()) r.valid_loss = e[2].get<Real>();
      t.history.epochs.push_back(r);
    }
  }
  if (t.net.InputDim() != ContextDim(t.norm.Dim(), t.config.context))
    throw DataError(path + ": network input does not match the context layout");
  return t;
}

ContextWindowDataset::ContextWindowDataset(std::span<const FeatureMatrix> chunks,
                                           std::span<const TagSet> tags,
                                           const ContextOptions &opts,
                                           int stride,
                                           std::span<const size_t> chunk_subset)
    : chunks_(chunks), tags_(tags), opts_(opts) {
  opts_.Validate();
  if (chunks.size() != tags.size())
    throw ShapeError("one tag set per chunk is required");
  std::vector<size_t> all;
  if (chunk_subset.empty()) {
    all.resize(chunks.size());
    std::iota(all.begin(), all.end(), 0);
    chunk_subset = all;
  }
  noise_.resize(chunks.size());
  Eigen::Index feat_dim = -1;
  for (size_t c : chunk_subset) {
    const FeatureMatrix &m = chunks[c];
    if (feat_dim < 0) feat_dim = m.Dim();
    if (m.Dim() != feat_dim)
      throw ShapeError("chunk " + m.chunk_id + " has dimension " +
                       std::to_string(m.Dim()) + ", expected " +
                       std::to_string(feat_dim));
    if (opts_.append_noise) noise_[c] = NoiseEstimate(m.values, opts_.noise_frames);
    for (Eigen::Index center : WindowCenters(m.NumFrames(), stride))
      windows_.push_back({c, center});
  }
  dim_ = feat_dim < 0 ? 0 : ContextDim(feat_dim, opts_);
}

void ContextWindowDataset::Fill(std::span<const size_t> indices,
                                Matrix *inputs, Matrix *targets) const {
  const auto n = static_cast<Eigen::Index>(indices.size());
  inputs->resize(dim_, n);
  targets->resize(kNumTags, n);
  for (Eigen::Index j = 0; j < n; j++) {
    const Window &w = windows_[indices[static_cast<size_t>(j)]];
    FillContextWindow(chunks_[w.chunk].values, noise_[w.chunk], w.center, opts_,
                      inputs->col(j));
    targets->col(j) = tags_[w.chunk].ToTargetVector();
  }
}

Tagger TrainTagger(std::span<const FeatureMatrix> train,
                   std::span<const TagSet> tags, const TaggerConfig &config,
                   const NormStats &norm) {
  config.Validate();
  if (train.empty()) throw DataError("no training chunks");
  if (train.size() != tags.size())
    throw ShapeError("one tag set per training chunk is required");

  std::vector<FeatureMatrix> normed;
  normed.reserve(train.size());
  for (const auto &m : train) {
    if (m.kind != config.features)
      throw DataError("chunk " + m.chunk_id + " holds " +
                      FeatureKindName(m.kind) + " features, tagger expects " +
                      FeatureKindName(config.features));
    normed.push_back(ApplyNorm(m, norm));
  }

  // Held-out chunks for early stopping, drawn once from the config seed.
  std::vector<size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  Rng split_rng(DeriveSeed(config.seed, "tagger-validation-split"));
  std::shuffle(order.begin(), order.end(), split_rng);
  auto num_valid = static_cast<size_t>(config.validation_fraction *
                                       static_cast<Real>(train.size()));
  std::vector<size_t> valid_ids(order.begin(), order.begin() + num_valid);
  std::vector<size_t> train_ids(order.begin() + num_valid, order.end());
  std::sort(valid_ids.begin(), valid_ids.end());
  std::sort(train_ids.begin(), train_ids.end());

  ContextWindowDataset train_set(normed, tags, config.context,
                                 config.train_stride, train_ids);
  std::unique_ptr<ContextWindowDataset> valid_set;
  if (!valid_ids.empty())
    valid_set = std::make_unique<ContextWindowDataset>(
        normed, tags, config.context, config.train_stride, valid_ids);

  Tagger t;
  t.config = config;
  t.norm = norm;
  t.net = MlpModel::Create(train_set.InputDim(), TaggerLayerSpecs(config),
                           DeriveSeed(config.seed, "tagger-init"));
  t.net.training() = config.training;
  spdlog::info("training tagger: {} windows from {} chunks, {} held out, input "
               "dim {}",
               train_set.Size(), train_ids.size(), valid_ids.size(),
               train_set.InputDim());
  t.history = TrainMlp(&t.net, train_set, valid_set.get(), config.loss,
                       config.training, DeriveSeed(config.seed, "tagger-sgd"));
  return t;
}

Vector AggregateWindows(const Matrix &window_outputs, ChunkAggregation a) {
  if (window_outputs.cols() == 0)
    throw DataError("cannot pool a chunk with no windows");
  if (a == ChunkAggregation::kMax) return window_outputs.rowwise().maxCoeff();
  return window_outputs.rowwise().mean();
}

ChunkScore PredictChunk(const Tagger &tagger, const FeatureMatrix &features) {
  if (features.Dim() != tagger.norm.Dim())
    throw ShapeError("chunk " + features.chunk_id + " has dimension " +
                     std::to_string(features.Dim()) + ", tagger expects " +
                     std::to_string(tagger.norm.Dim()));
  FeatureMatrix normed;
  const FeatureMatrix *m = &features;
  if (features.norm_stats_id.empty()) {
    normed = ApplyNorm(features, tagger.norm);
    m = &normed;
  } else if (features.norm_stats_id != tagger.norm.Id()) {
    throw DataError("chunk " + features.chunk_id +
                    " was normalized with different statistics");
  }
  Matrix inputs = MakeContextInputs(*m, tagger.config.context);
  if (inputs.rows() != tagger.net.InputDim())
    throw ShapeError("context layout gives " + std::to_string(inputs.rows()) +
                     " inputs, network expects " +
                     std::to_string(tagger.net.InputDim()));
  ChunkScore s;
  s.chunk_id = features.chunk_id;
  s.posteriors = AggregateWindows(Predict(tagger.net, inputs),
                                  tagger.config.aggregation);
  return s;
}

TagSet DecideTags(const ChunkScore &score, Real threshold) {
  TagSet t;
  for (int k = 0; k < kNumTags; k++)
    if (score.posteriors(k) > threshold) t.Set(k);
  return t;
}

}  // namespace audiotag
