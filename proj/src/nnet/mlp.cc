// nnet/mlp.cc

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

#include "audiotag/nnet/mlp.h"

#include <cmath>

namespace audiotag {

std::string ActivationName(Activation a) {
  switch (a) {
    case Activation::kLinear: return "linear";
    case Activation::kRelu: return "relu";
    case Activation::kSigmoid: return "sigmoid";
  }
  return "?";
}

Activation ParseActivation(const std::string &name) {
  if (name == "linear") return Activation::kLinear;
  if (name == "relu") return Activation::kRelu;
  if (name == "sigmoid") return Activation::kSigmoid;
  throw ConfigError("unknown activation '" + name + "'");
}

MlpModel::MlpModel(Eigen::Index input_dim, std::vector<DenseLayer> layers,
                   uint64_t seed)
    : input_dim_(input_dim), layers_(std::move(layers)), seed_(seed) {
  Validate();
}

MlpModel MlpModel::Create(Eigen::Index input_dim,
                          const std::vector<LayerSpec> &specs,
                          uint64_t seed) {
  Rng rng(seed);
  std::vector<DenseLayer> layers;
  Eigen::Index fan_in = input_dim;
  for (const auto &spec : specs) {
    if (spec.units < 1) throw ConfigError("layer with no units");
    DenseLayer layer;
    layer.activation = spec.activation;
    layer.dropout_rate = spec.dropout_rate;
    Real limit = std::sqrt(6.0 / static_cast<Real>(fan_in + spec.units));
    std::uniform_real_distribution<Real> dist(-limit, limit);
    layer.weights.resize(spec.units, fan_in);
    // Fill row-major so the draw order does not depend on storage order.
    for (Eigen::Index r = 0; r < spec.units; r++)
      for (Eigen::Index c = 0; c < fan_in; c++)
        layer.weights(r, c) = dist(rng);
    layer.bias = Vector::Zero(spec.units);
    layers.push_back(std::move(layer));
    fan_in = spec.units;
  }
  return MlpModel(input_dim, std::move(layers), seed);
}

size_t MlpModel::NumParameters() const {
  size_t n = 0;
  for (const auto &l : layers_)
    n += static_cast<size_t>(l.weights.size() + l.bias.size());
  return n;
}

void MlpModel::Validate() const {
  Eigen::Index dim = input_dim_;
  for (size_t i = 0; i < layers_.size(); i++) {
    const auto &l = layers_[i];
    if (l.InputDim() != dim)
      throw ShapeError("layer " + std::to_string(i) + " expects input dim " +
                       std::to_string(l.InputDim()) + ", previous layer gives " +
                       std::to_string(dim));
    if (l.bias.size() != l.OutputDim())
      throw ShapeError("layer " + std::to_string(i) + " bias size mismatch");
    if (!(l.dropout_rate >= 0.0 && l.dropout_rate < 1.0))
      throw ConfigError("layer " + std::to_string(i) +
                        " dropout rate must lie in [0, 1)");
    dim = l.OutputDim();
  }
}

void ApplyActivation(Activation a, const Matrix &pre, Matrix *post) {
  switch (a) {
    case Activation::kLinear:
      *post = pre;
      break;
    case Activation::kRelu:
      *post = pre.cwiseMax(0.0);
      break;
    case Activation::kSigmoid:
      *post = (1.0 + (-pre.array()).exp()).inverse().matrix();
      break;
  }
}

ForwardCache Forward(const MlpModel &model, const Matrix &inputs,
                     ForwardMode mode, Rng *rng) {
  if (inputs.rows() != model.InputDim())
    throw ShapeError("input has dim " + std::to_string(inputs.rows()) +
                     ", model expects " + std::to_string(model.InputDim()));
  if (mode == ForwardMode::kTrain && rng == nullptr)
    throw ConfigError("training-mode forward pass needs a mask source");

  const size_t L = model.NumLayers();
  ForwardCache cache;
  cache.inputs.resize(L);
  cache.masks.resize(L);
  cache.scales.assign(L, 1.0);
  cache.pre.resize(L);
  cache.post.resize(L);

  const Matrix *x = &inputs;
  for (size_t l = 0; l < L; l++) {
    const DenseLayer &layer = model.layer(l);
    const Real rho = layer.dropout_rate;
    if (rho > 0.0 && mode == ForwardMode::kTrain) {
      std::bernoulli_distribution keep(1.0 - rho);
      Matrix mask(x->rows(), x->cols());
      for (Eigen::Index j = 0; j < mask.cols(); j++)
        for (Eigen::Index i = 0; i < mask.rows(); i++)
          mask(i, j) = keep(*rng) ? 1.0 : 0.0;
      cache.inputs[l] = x->cwiseProduct(mask);
      cache.masks[l] = std::move(mask);
    } else {
      cache.inputs[l] = *x;
      if (rho > 0.0) cache.scales[l] = 1.0 - rho;
    }
    cache.pre[l] = layer.weights * cache.inputs[l];
    if (cache.scales[l] != 1.0) cache.pre[l] *= cache.scales[l];
    cache.pre[l].colwise() += layer.bias;
    ApplyActivation(layer.activation, cache.pre[l], &cache.post[l]);
    x = &cache.post[l];
  }
  return cache;
}

Matrix Predict(const MlpModel &model, const Matrix &inputs) {
  if (inputs.rows() != model.InputDim())
    throw ShapeError("input has dim " + std::to_string(inputs.rows()) +
                     ", model expects " + std::to_string(model.InputDim()));
  // Same arithmetic as Forward in infer mode, without keeping the cache.
  Matrix x = inputs, pre;
  for (const DenseLayer &layer : model.layers()) {
    pre = layer.weights * x;
    if (layer.dropout_rate > 0.0) pre *= 1.0 - layer.dropout_rate;
    pre.colwise() += layer.bias;
    ApplyActivation(layer.activation, pre, &x);
  }
  return x;
}

}  // namespace audiotag
