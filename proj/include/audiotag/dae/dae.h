// dae/dae.h

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

#ifndef AUDIOTAG_DAE_DAE_H_
#define AUDIOTAG_DAE_DAE_H_

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "audiotag/feat/context-window.h"
#include "audiotag/feat/norm-stats.h"
#include "audiotag/nnet/mlp-train.h"

namespace audiotag {

// Asymmetric: a stack of frames in, the middle frame out.
// Symmetric: the whole stack in and out.
enum class DaeVariant { kAsymmetric, kSymmetric };

std::string DaeVariantName(DaeVariant v);
DaeVariant ParseDaeVariant(const std::string &name);

// Deep denoising autoencoder
//
//   input -> encoder_hidden (relu) -> bottleneck (relu | linear)
//         -> decoder_hidden (relu) -> output (linear)
//
// with untied encoder and decoder weights.  Inputs are corrupted by
// dropout at rate `corruption` during training only.
struct DaeConfig {
  DaeVariant variant = DaeVariant::kAsymmetric;
  int input_frames = 7;  // odd
  Eigen::Index encoder_hidden = 500;
  Eigen::Index bottleneck = 50;
  Activation bottleneck_activation = Activation::kRelu;
  Eigen::Index decoder_hidden = 500;
  Real corruption = 0.1;
  // Fixed budget of 100 epochs; no early stopping.  The loss is the squared
  // norm over all output dims, so the rate sits below the tagger's.
  TrainingOptions training{0.001, 0.9, 100, 100, 0};
  // Fraction of windows held out for the reconstruction-error curve.
  Real cv_fraction = 0.1;
  uint64_t seed = 0;

  static DaeConfig Asymmetric();  // bottleneck 50
  static DaeConfig Symmetric();   // bottleneck 200

  void Validate() const;
  // Window layout of the input (no noise block, stride 1).
  ContextOptions WindowOptions() const;
  Eigen::Index InputDim(Eigen::Index feat_dim) const {
    return feat_dim * input_frames;
  }
  Eigen::Index OutputDim(Eigen::Index feat_dim) const {
    return variant == DaeVariant::kAsymmetric ? feat_dim
                                              : feat_dim * input_frames;
  }
};

nlohmann::json DaeConfigToJson(const DaeConfig &c);
DaeConfig DaeConfigFromJson(const nlohmann::json &j);

struct DaeModel {
  DaeConfig config;
  // Statistics of the frames the autoencoder was trained on; EncodeChunk
  // applies them to raw input.
  NormStats norm;
  MlpModel encoder;  // input -> code
  MlpModel decoder;  // code -> reconstruction
  // Per-epoch training and CV reconstruction error (mean squared norm per
  // window).
  TrainingHistory history;

  Eigen::Index InputDim() const { return encoder.InputDim(); }
  Eigen::Index CodeDim() const { return encoder.OutputDim(); }
  Eigen::Index OutputDim() const { return decoder.OutputDim(); }

  void Save(const std::string &path) const;
  static DaeModel Load(const std::string &path);
};

// Freshly initialised encoder and decoder for the given dimensions.
DaeModel InitDae(const DaeConfig &config, Eigen::Index input_dim,
                 Eigen::Index output_dim);

// One network with the decoder stacked on the encoder, and the inverse.
// The layers are copied, so the two halves never share storage.
MlpModel JoinDae(const DaeModel &m);
void SplitDae(const MlpModel &joined, DaeModel *m);

// Trains the joined network by MSE with SGD and momentum for exactly
// config.training.max_epochs epochs, recording the CV error per epoch.
void TrainDaeNetworks(DaeModel *m, const BatchSource &train,
                      const BatchSource *cv);

// Stride-1 windows of normalized chunks with their reconstruction targets.
class DaeWindowDataset : public BatchSource {
 public:
  struct Window {
    size_t chunk;
    Eigen::Index center;
  };
  DaeWindowDataset(std::span<const FeatureMatrix> chunks,
                   const DaeConfig &config, std::vector<Window> windows);

  // Every window of every chunk, in order.
  static std::vector<Window> AllWindows(std::span<const FeatureMatrix> chunks);

  size_t Size() const override { return windows_.size(); }
  Eigen::Index InputDim() const override { return in_dim_; }
  Eigen::Index TargetDim() const override { return out_dim_; }
  void Fill(std::span<const size_t> indices, Matrix *inputs,
            Matrix *targets) const override;

 private:
  std::span<const FeatureMatrix> chunks_;
  DaeVariant variant_;
  ContextOptions opts_;
  Eigen::Index feat_dim_ = 0, in_dim_ = 0, out_dim_ = 0;
  std::vector<Window> windows_;
};

// Fits the autoencoder on every window of `chunks` (raw MBK matrices),
// holding out a seeded config.cv_fraction of the windows.
DaeModel TrainDae(std::span<const FeatureMatrix> chunks,
                  const DaeConfig &config, const NormStats &norm);

// Columns are samples.  Deterministic (no corruption).
Matrix Encode(const DaeModel &m, const Matrix &inputs);
Matrix Decode(const DaeModel &m, const Matrix &codes);

// Mean over samples of ||decode(encode(x)) - t||^2.
Real ReconstructionError(const DaeModel &m, const BatchSource &data);

// Codes of every stride-1 window of one chunk: frames x CodeDim, kind
// kDaeCode, unnormalized.  Raw input is normalized with m.norm first.
FeatureMatrix EncodeChunk(const DaeModel &m, const FeatureMatrix &features);
std::vector<FeatureMatrix> EncodeCorpus(const DaeModel &m,
                                        std::span<const FeatureMatrix> chunks);

}  // namespace audiotag

#endif  // AUDIOTAG_DAE_DAE_H_
