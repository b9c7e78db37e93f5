// dae/dae.cc

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

#include "audiotag/dae/dae.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <spdlog/spdlog.h>

#include "audiotag/nnet/model-io.h"

namespace audiotag {

std::string DaeVariantName(DaeVariant v) {
  return v == DaeVariant::kAsymmetric ? "asymmetric" : "symmetric";
}

DaeVariant ParseDaeVariant(const std::string &name) {
  if (name == "asymmetric" || name == "adae") return DaeVariant::kAsymmetric;
  if (name == "symmetric" || name == "sdae") return DaeVariant::kSymmetric;
  throw ConfigError("unknown DAE variant '" + name + "'");
}

DaeConfig DaeConfig::Asymmetric() { return DaeConfig(); }

DaeConfig DaeConfig::Symmetric() {
  DaeConfig c;
  c.variant = DaeVariant::kSymmetric;
  c.bottleneck = 200;
  return c;
}

void DaeConfig::Validate() const {
  if (input_frames < 1 || input_frames % 2 == 0)
    throw ConfigError("DAE input frame count must be odd and positive");
  if (encoder_hidden < 1 || bottleneck < 1 || decoder_hidden < 1)
    throw ConfigError("DAE layer with no units");
  if (bottleneck_activation == Activation::kSigmoid)
    throw ConfigError("DAE bottleneck must be relu or linear");
  if (!(corruption >= 0.0 && corruption < 1.0))
    throw ConfigError("corruption rate must lie in [0, 1)");
  if (!(cv_fraction >= 0.0 && cv_fraction < 1.0))
    throw ConfigError("CV fraction must lie in [0, 1)");
  if (training.batch_size < 1 || training.max_epochs < 0 ||
      !(training.learning_rate > 0.0) ||
      !(training.momentum >= 0.0 && training.momentum < 1.0))
    throw ConfigError("invalid DAE training options");
}

ContextOptions DaeConfig::WindowOptions() const {
  ContextOptions o;
  o.tau = input_frames / 2;
  o.append_noise = false;
  o.stride = 1;
  o.dilation = 1;
  return o;
}

nlohmann::json DaeConfigToJson(const DaeConfig &c) {
  return {{"variant", DaeVariantName(c.variant)},
          {"input_frames", c.input_frames},
          {"encoder_hidden", c.encoder_hidden},
          {"bottleneck", c.bottleneck},
          {"bottleneck_activation", ActivationName(c.bottleneck_activation)},
          {"decoder_hidden", c.decoder_hidden},
          {"corruption", c.corruption},
          {"training", TrainingOptionsToJson(c.training)},
          {"cv_fraction", c.cv_fraction},
          {"seed", c.seed},
          {"tied_weights", false}};
}

DaeConfig DaeConfigFromJson(const nlohmann::json &j) {
  DaeConfig c;
  try {
    c.variant = ParseDaeVariant(j.at("variant").get<std::string>());
    c.input_frames = j.at("input_frames").get<int>();
    c.encoder_hidden = j.at("encoder_hidden").get<Eigen::Index>();
    c.bottleneck = j.at("bottleneck").get<Eigen::Index>();
    c.bottleneck_activation =
        ParseActivation(j.at("bottleneck_activation").get<std::string>());
    c.decoder_hidden = j.at("decoder_hidden").get<Eigen::Index>();
    c.corruption = j.at("corruption").get<Real>();
    c.training = TrainingOptionsFromJson(j.at("training"));
    c.cv_fraction = j.at("cv_fraction").get<Real>();
    c.seed = j.at("seed").get<uint64_t>();
  } catch (const nlohmann::json::exception &e) {
    throw DataError(std::string("bad DAE configuration: ") + e.what());
  }
  return c;
}

DaeModel InitDae(const DaeConfig &config, Eigen::Index input_dim,
                 Eigen::Index output_dim) {
  config.Validate();
  std::vector<LayerSpec> specs = {
      {config.encoder_hidden, Activation::kRelu, config.corruption},
      {config.bottleneck, config.bottleneck_activation, 0.0},
      {config.decoder_hidden, Activation::kRelu, 0.0},
      {output_dim, Activation::kLinear, 0.0},
  };
  DaeModel m;
  m.config = config;
  MlpModel joined =
      MlpModel::Create(input_dim, specs, DeriveSeed(config.seed, "dae-init"));
  joined.training() = config.training;
  SplitDae(joined, &m);
  return m;
}

MlpModel JoinDae(const DaeModel &m) {
  std::vector<DenseLayer> layers = m.encoder.layers();
  for (const auto &l : m.decoder.layers()) layers.push_back(l);
  MlpModel joined(m.encoder.InputDim(), std::move(layers), m.encoder.seed());
  joined.training() = m.config.training;
  return joined;
}

void SplitDae(const MlpModel &joined, DaeModel *m) {
  // The code layer is the output of the second layer.
  if (joined.NumLayers() != 4)
    throw ShapeError("a DAE network has exactly four layers");
  const auto &l = joined.layers();
  m->encoder = MlpModel(joined.InputDim(), {l[0], l[1]}, joined.seed());
  m->decoder = MlpModel(l[1].OutputDim(), {l[2], l[3]}, joined.seed());
  m->encoder.training() = joined.training();
  m->decoder.training() = joined.training();
}

void TrainDaeNetworks(DaeModel *m, const BatchSource &train,
                      const BatchSource *cv) {
  MlpModel joined = JoinDae(*m);
  TrainingOptions opts = m->config.training;
  opts.patience = 0;
  m->history = TrainMlp(&joined, train, cv, LossKind::kMse, opts,
                        DeriveSeed(m->config.seed, "dae-sgd"));
  SplitDae(joined, m);
}

DaeWindowDataset::DaeWindowDataset(std::span<const FeatureMatrix> chunks,
                                   const DaeConfig &config,
                                   std::vector<Window> windows)
    : chunks_(chunks),
      variant_(config.variant),
      opts_(config.WindowOptions()),
      windows_(std::move(windows)) {
  if (!chunks.empty()) feat_dim_ = chunks[0].Dim();
  for (const auto &c : chunks)
    if (c.Dim() != feat_dim_)
      throw ShapeError("chunk " + c.chunk_id + " has dimension " +
                       std::to_string(c.Dim()) + ", expected " +
                       std::to_string(feat_dim_));
  in_dim_ = config.InputDim(feat_dim_);
  out_dim_ = config.OutputDim(feat_dim_);
}

std::vector<DaeWindowDataset::Window> DaeWindowDataset::AllWindows(
    std::span<const FeatureMatrix> chunks) {
  std::vector<Window> w;
  for (size_t c = 0; c < chunks.size(); c++)
    for (Eigen::Index t = 0; t < chunks[c].NumFrames(); t++) w.push_back({c, t});
  return w;
}

void DaeWindowDataset::Fill(std::span<const size_t> indices, Matrix *inputs,
                            Matrix *targets) const {
  const auto n = static_cast<Eigen::Index>(indices.size());
  inputs->resize(in_dim_, n);
  targets->resize(out_dim_, n);
  const RowVector no_noise;
  const Eigen::Index middle = opts_.tau * feat_dim_;
  for (Eigen::Index j = 0; j < n; j++) {
    const Window &w = windows_[indices[static_cast<size_t>(j)]];
    FillContextWindow(chunks_[w.chunk].values, no_noise, w.center, opts_,
                      inputs->col(j));
    if (variant_ == DaeVariant::kAsymmetric)
      targets->col(j) = inputs->col(j).segment(middle, feat_dim_);
    else
      targets->col(j) = inputs->col(j);
  }
}

DaeModel TrainDae(std::span<const FeatureMatrix> chunks,
                  const DaeConfig &config, const NormStats &norm) {
  config.Validate();
  if (chunks.empty()) throw DataError("no DAE training chunks");
  std::vector<FeatureMatrix> normed;
  normed.reserve(chunks.size());
  for (const auto &c : chunks) normed.push_back(ApplyNorm(c, norm));

  auto windows = DaeWindowDataset::AllWindows(normed);
  Rng rng(DeriveSeed(config.seed, "dae-cv-split"));
  std::shuffle(windows.begin(), windows.end(), rng);
  auto num_cv = static_cast<size_t>(config.cv_fraction *
                                    static_cast<Real>(windows.size()));
  std::vector<DaeWindowDataset::Window> cv_windows(windows.begin(),
                                                   windows.begin() + num_cv);
  windows.erase(windows.begin(), windows.begin() + num_cv);

  DaeWindowDataset train(normed, config, std::move(windows));
  DaeWindowDataset cv(normed, config, std::move(cv_windows));
  DaeModel m = InitDae(config, train.InputDim(), train.TargetDim());
  m.norm = norm;
  spdlog::info("training {} DAE: {} windows, {} held out, code dim {}",
               DaeVariantName(config.variant), train.Size(), cv.Size(),
               config.bottleneck);
  TrainDaeNetworks(&m, train, cv.Size() > 0 ? &cv : nullptr);
  return m;
}

Matrix Encode(const DaeModel &m, const Matrix &inputs) {
  return Predict(m.encoder, inputs);
}

Matrix Decode(const DaeModel &m, const Matrix &codes) {
  return Predict(m.decoder, codes);
}

Real ReconstructionError(const DaeModel &m, const BatchSource &data) {
  if (data.TargetDim() != m.OutputDim())
    throw ShapeError("reconstruction targets do not match the decoder");
  return EvaluateLoss(JoinDae(m), data, LossKind::kMse);
}

FeatureMatrix EncodeChunk(const DaeModel &m, const FeatureMatrix &features) {
  if (features.Dim() * m.config.input_frames != m.InputDim())
    throw ShapeError("chunk " + features.chunk_id + " has dimension " +
                     std::to_string(features.Dim()) +
                     ", autoencoder expects frames of " +
                     std::to_string(m.InputDim() / m.config.input_frames));
  FeatureMatrix normed;
  const FeatureMatrix *src = &features;
  if (features.norm_stats_id.empty() && m.norm.Dim() > 0) {
    normed = ApplyNorm(features, m.norm);
    src = &normed;
  }
  Matrix windows = MakeContextInputs(*src, m.config.WindowOptions());
  FeatureMatrix out;
  out.kind = FeatureKind::kDaeCode;
  out.frame_period = features.frame_period;
  out.chunk_id = features.chunk_id;
  out.values = Encode(m, windows).transpose();
  return out;
}

std::vector<FeatureMatrix> EncodeCorpus(const DaeModel &m,
                                        std::span<const FeatureMatrix> chunks) {
  std::vector<FeatureMatrix> out;
  out.reserve(chunks.size());
  for (const auto &c : chunks) out.push_back(EncodeChunk(m, c));
  return out;
}

void DaeModel::Save(const std::string &path) const {
  ModelArchive ar("dae");
  ar.meta()["config"] = DaeConfigToJson(config);
  nlohmann::json curve = nlohmann::json::array();
  for (const auto &e : history.epochs)
    curve.push_back({e.epoch, e.train_loss,
                     std::isnan(e.valid_loss) ? nlohmann::json(nullptr)
                                              : nlohmann::json(e.valid_loss)});
  ar.meta()["cv_error"] = curve;
  if (norm.Dim() > 0) PutNormStats(&ar, "norm", norm);
  PutMlp(&ar, "encoder", encoder);
  PutMlp(&ar, "decoder", decoder);
  ar.Write(path);
}

DaeModel DaeModel::Load(const std::string &path) {
  ModelArchive ar = ModelArchive::Read(path, "dae");
  DaeModel m;
  m.config = DaeConfigFromJson(ar.meta()["config"]);
  if (ar.Has("norm.mean")) m.norm = GetNormStats(ar, "norm");
  m.encoder = GetMlp(ar, "encoder");
  m.decoder = GetMlp(ar, "decoder");
  if (m.encoder.OutputDim() != m.decoder.InputDim())
    throw DataError(path + ": encoder and decoder do not meet at the code");
  for (const auto &e : ar.meta().value("cv_error", nlohmann::json::array())) {
    EpochRecord r;
    r.epoch = e[0].get<int>();
    r.train_loss = e[1].get<Real>();
    if (!e[2].is_null()) r.valid_loss = e[2].get<Real>();
    m.history.epochs.push_back(r);
  }
  m.history.best_epoch =
      m.history.epochs.empty() ? 0 : m.history.epochs.back().epoch;
  return m;
}

}  // namespace audiotag
