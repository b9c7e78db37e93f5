// nnet/mlp-train.h

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

#ifndef AUDIOTAG_NNET_MLP_TRAIN_H_
#define AUDIOTAG_NNET_MLP_TRAIN_H_

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "audiotag/nnet/mlp.h"

namespace audiotag {

enum class LossKind {
  // (1/N) sum_n || y_n - t_n ||^2
  kMse,
  // -(1/N) sum_n sum_k [t log y + (1 - t) log(1 - y)], evaluated from the
  // pre-sigmoid outputs.  Needs a sigmoid output layer.
  kBce,
};

std::string LossKindName(LossKind k);
LossKind ParseLossKind(const std::string &name);

struct LayerGradient {
  Matrix weights;
  Vector bias;
};

struct LossGradient {
  Real loss = 0.0;
  std::vector<LayerGradient> grads;
};

// Mean per-sample loss of a batch (one sample per column) and its gradient
// with respect to every parameter.  With `rng` the forward pass runs in
// train mode (dropout masks drawn from rng); without, in infer mode.
// Throws NumericError on a non-finite loss.
LossGradient LossAndGradient(const MlpModel &model, const Matrix &inputs,
                             const Matrix &targets, LossKind kind,
                             Rng *rng = nullptr);

// Infer-mode loss only.
Real ComputeLoss(const MlpModel &model, const Matrix &inputs,
                 const Matrix &targets, LossKind kind);

// Classical momentum: v <- mu v - lr g ; theta <- theta + v.
class SgdMomentum {
 public:
  explicit SgdMomentum(const MlpModel &model);
  void Step(MlpModel *model, const std::vector<LayerGradient> &grads,
            Real learning_rate, Real momentum);

 private:
  std::vector<LayerGradient> velocity_;
};

// Central finite differences against the analytic gradient, in the
// deterministic inference path.
struct GradientCheckOptions {
  Real step = 1e-5;
  Real tolerance = 1e-4;
  // Parameters checked per weight matrix / bias vector; 0 checks all.
  int samples_per_tensor = 0;
  uint64_t seed = 0;
};

struct GradientCheckReport {
  Real max_relative_error = 0.0;
  size_t num_checked = 0;
  std::string worst_parameter;
  bool passed = false;
};

using GradientFunction = std::function<LossGradient(
    const MlpModel &, const Matrix &, const Matrix &, LossKind)>;

// Relative error is |analytic - numeric| / max(|analytic|, |numeric|, 1e-6);
// the floor keeps parameters whose true gradient is ~0 from dominating.
// `gradient_fn` defaults to LossAndGradient in infer mode.
GradientCheckReport GradientCheck(const MlpModel &model, const Matrix &inputs,
                                  const Matrix &targets, LossKind kind,
                                  const GradientCheckOptions &opts = {},
                                  GradientFunction gradient_fn = nullptr);

// Supplies training samples by index so large corpora never need to be
// materialised as one matrix.
class BatchSource {
 public:
  virtual ~BatchSource() = default;
  virtual size_t Size() const = 0;
  virtual Eigen::Index InputDim() const = 0;
  virtual Eigen::Index TargetDim() const = 0;
  // Resizes and fills one column per index.
  virtual void Fill(std::span<const size_t> indices, Matrix *inputs,
                    Matrix *targets) const = 0;
};

// Columns of two in-memory matrices.
class MatrixBatchSource : public BatchSource {
 public:
  MatrixBatchSource(const Matrix &inputs, const Matrix &targets);
  size_t Size() const override { return static_cast<size_t>(inputs_.cols()); }
  Eigen::Index InputDim() const override { return inputs_.rows(); }
  Eigen::Index TargetDim() const override { return targets_.rows(); }
  void Fill(std::span<const size_t> indices, Matrix *inputs,
            Matrix *targets) const override;

 private:
  const Matrix &inputs_;
  const Matrix &targets_;
};

struct EpochRecord {
  int epoch = 0;
  Real train_loss = 0.0;  // mean of the epoch's minibatch losses
  Real valid_loss = std::numeric_limits<Real>::quiet_NaN();
};

struct TrainingHistory {
  std::vector<EpochRecord> epochs;
  int best_epoch = 0;  // 0: the initial parameters were kept
  bool stopped_early = false;
};

// Infer-mode mean loss over a whole source, in batches.
Real EvaluateLoss(const MlpModel &model, const BatchSource &source,
                  LossKind kind, size_t batch_size = 1000);

// Minibatch SGD with momentum.  Samples are reshuffled every epoch from a
// generator seeded with `seed`, which also drives the dropout masks, so a
// run is a deterministic function of (model, data, options, seed).  With a
// validation source and opts.patience > 0 the parameters of the best
// validation epoch are restored at the end.
TrainingHistory TrainMlp(MlpModel *model, const BatchSource &train,
                         const BatchSource *valid, LossKind kind,
                         const TrainingOptions &opts, uint64_t seed);

}  // namespace audiotag

#endif  // AUDIOTAG_NNET_MLP_TRAIN_H_
