// nnet/mlp.h

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

#ifndef AUDIOTAG_NNET_MLP_H_
#define AUDIOTAG_NNET_MLP_H_

#include <string>
#include <vector>

#include "audiotag/base/audiotag-common.h"

namespace audiotag {

enum class Activation { kLinear, kRelu, kSigmoid };

std::string ActivationName(Activation a);
Activation ParseActivation(const std::string &name);

// Fully connected layer y = act(W x + b).  `dropout_rate` is the probability
// of zeroing each unit of this layer's *input* during training; the input
// layer of a network and every hidden layer therefore each own one rate.
struct DenseLayer {
  Matrix weights;  // out x in
  Vector bias;     // out
  Activation activation = Activation::kLinear;
  Real dropout_rate = 0.0;

  Eigen::Index InputDim() const { return weights.cols(); }
  Eigen::Index OutputDim() const { return weights.rows(); }
};

struct LayerSpec {
  Eigen::Index units = 0;
  Activation activation = Activation::kRelu;
  Real dropout_rate = 0.0;  // on the layer's input
};

struct TrainingOptions {
  Real learning_rate = 0.005;
  Real momentum = 0.9;
  int batch_size = 100;
  int max_epochs = 100;
  // Epochs without a validation improvement before stopping; 0 trains for
  // exactly max_epochs and keeps the final parameters.
  int patience = 10;
};

class MlpModel {
 public:
  MlpModel() = default;

  // Glorot-uniform weights in +-sqrt(6 / (fan_in + fan_out)), zero biases.
  static MlpModel Create(Eigen::Index input_dim,
                         const std::vector<LayerSpec> &layers, uint64_t seed);

  Eigen::Index InputDim() const { return input_dim_; }
  Eigen::Index OutputDim() const {
    return layers_.empty() ? input_dim_ : layers_.back().OutputDim();
  }
  size_t NumLayers() const { return layers_.size(); }
  size_t NumParameters() const;
  uint64_t seed() const { return seed_; }

  const std::vector<DenseLayer> &layers() const { return layers_; }
  std::vector<DenseLayer> &layers() { return layers_; }
  const DenseLayer &layer(size_t i) const { return layers_[i]; }
  DenseLayer &layer(size_t i) { return layers_[i]; }

  TrainingOptions &training() { return training_; }
  const TrainingOptions &training() const { return training_; }

  // Builds a model from explicit layers (used by deserialisation).
  MlpModel(Eigen::Index input_dim, std::vector<DenseLayer> layers,
           uint64_t seed);

  // Throws ShapeError when layer dimensions do not chain or a rate is
  // outside [0, 1).
  void Validate() const;

 private:
  Eigen::Index input_dim_ = 0;
  std::vector<DenseLayer> layers_;
  uint64_t seed_ = 0;
  TrainingOptions training_;
};

enum class ForwardMode {
  // Zero each input unit of layer l with probability rho_l.
  kTrain,
  // No masking; weights that saw dropout are scaled by (1 - rho_l).
  kInfer,
};

// Everything backpropagation needs from a forward pass.  All matrices hold
// one sample per column.
struct ForwardCache {
  std::vector<Matrix> inputs;  // input to layer l, after masking
  std::vector<Matrix> masks;   // 0/1 masks (train mode with rho > 0 only)
  std::vector<Real> scales;    // (1 - rho_l) in infer mode, otherwise 1
  std::vector<Matrix> pre;     // W x + b, before the activation
  std::vector<Matrix> post;    // activations; post.back() is the output

  const Matrix &output() const { return post.back(); }
};

// `inputs` is InputDim x N.  Train mode needs `rng`.
ForwardCache Forward(const MlpModel &model, const Matrix &inputs,
                     ForwardMode mode, Rng *rng = nullptr);

// Inference-mode outputs, OutputDim x N.
Matrix Predict(const MlpModel &model, const Matrix &inputs);

void ApplyActivation(Activation a, const Matrix &pre, Matrix *post);

}  // namespace audiotag

#endif  // AUDIOTAG_NNET_MLP_H_
