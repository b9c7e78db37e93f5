// nnet/mlp-train.cc

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

#include "audiotag/nnet/mlp-train.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <spdlog/spdlog.h>

namespace audiotag {

std::string LossKindName(LossKind k) {
  return k == LossKind::kMse ? "mse" : "bce";
}

LossKind ParseLossKind(const std::string &name) {
  if (name == "mse") return LossKind::kMse;
  if (name == "bce") return LossKind::kBce;
  throw ConfigError("unknown loss '" + name + "' (expected mse or bce)");
}

namespace {

// d act / d pre, expressed through whichever of pre/post is cheaper.
Matrix ActivationDerivative(Activation a, const Matrix &pre,
                            const Matrix &post) {
  switch (a) {
    case Activation::kLinear:
      return Matrix::Ones(pre.rows(), pre.cols());
    case Activation::kRelu:
      return (pre.array() > 0.0).cast<Real>().matrix();
    case Activation::kSigmoid:
      return (post.array() * (1.0 - post.array())).matrix();
  }
  return {};
}

void CheckLossInputs(const MlpModel &model, const Matrix &inputs,
                     const Matrix &targets, LossKind kind) {
  if (model.NumLayers() == 0) throw ConfigError("model has no layers");
  if (targets.rows() != model.OutputDim() || targets.cols() != inputs.cols())
    throw ShapeError("targets are " + std::to_string(targets.rows()) + "x" +
                     std::to_string(targets.cols()) + ", expected " +
                     std::to_string(model.OutputDim()) + "x" +
                     std::to_string(inputs.cols()));
  if (kind == LossKind::kBce &&
      model.layers().back().activation != Activation::kSigmoid)
    throw ConfigError("binary cross-entropy needs a sigmoid output layer");
}

// Loss of the output layer given its pre-activation and activation.
Real OutputLoss(LossKind kind, const Matrix &pre, const Matrix &post,
                const Matrix &targets) {
  const Real n = static_cast<Real>(targets.cols());
  if (kind == LossKind::kMse) return (post - targets).squaredNorm() / n;
  // log(1 + e^z) - t z, stable for either sign of z.
  auto z = pre.array();
  auto softplus = z.max(0.0) + (-z.abs()).exp().log1p();
  return (softplus - targets.array() * z).sum() / n;
}

[[noreturn]] void ThrowNonFinite(LossKind kind, const Matrix &inputs,
                                 const Matrix &pre) {
  std::ostringstream msg;
  msg << "non-finite " << LossKindName(kind) << " loss on a batch of "
      << inputs.cols() << " samples (max |input| = "
      << inputs.cwiseAbs().maxCoeff()
      << ", max |output pre-activation| = " << pre.cwiseAbs().maxCoeff()
      << ")";
  throw NumericError(msg.str());
}

}  // namespace

LossGradient LossAndGradient(const MlpModel &model, const Matrix &inputs,
                             const Matrix &targets, LossKind kind, Rng *rng) {
  CheckLossInputs(model, inputs, targets, kind);
  ForwardCache cache = Forward(
      model, inputs, rng ? ForwardMode::kTrain : ForwardMode::kInfer, rng);
  const size_t L = model.NumLayers();
  const Real n = static_cast<Real>(inputs.cols());

  LossGradient out;
  out.loss = OutputLoss(kind, cache.pre.back(), cache.post.back(), targets);
  if (!std::isfinite(out.loss)) ThrowNonFinite(kind, inputs, cache.pre.back());

  // Gradient of the mean loss with respect to the output pre-activation.
  Matrix delta;
  if (kind == LossKind::kBce) {
    delta = (cache.post.back() - targets) / n;
  } else {
    const auto &last = model.layers().back();
    delta = (2.0 / n) * (cache.post.back() - targets).cwiseProduct(
                            ActivationDerivative(last.activation,
                                                 cache.pre.back(),
                                                 cache.post.back()));
  }

  out.grads.resize(L);
  for (size_t l = L; l-- > 0;) {
    const DenseLayer &layer = model.layer(l);
    const Real s = cache.scales[l];
    out.grads[l].weights = s * (delta * cache.inputs[l].transpose());
    out.grads[l].bias = delta.rowwise().sum();
    if (l == 0) break;
    Matrix g = s * (layer.weights.transpose() * delta);
    if (cache.masks[l].size() > 0) g = g.cwiseProduct(cache.masks[l]);
    delta = g.cwiseProduct(ActivationDerivative(
        model.layer(l - 1).activation, cache.pre[l - 1], cache.post[l - 1]));
  }
  return out;
}

Real ComputeLoss(const MlpModel &model, const Matrix &inputs,
                 const Matrix &targets, LossKind kind) {
  CheckLossInputs(model, inputs, targets, kind);
  // Needs the output pre-activation, so run the last layer by hand.
  Matrix x = inputs, pre;
  for (const DenseLayer &layer : model.layers()) {
    pre = layer.weights * x;
    if (layer.dropout_rate > 0.0) pre *= 1.0 - layer.dropout_rate;
    pre.colwise() += layer.bias;
    ApplyActivation(layer.activation, pre, &x);
  }
  Real loss = OutputLoss(kind, pre, x, targets);
  if (!std::isfinite(loss)) ThrowNonFinite(kind, inputs, pre);
  return loss;
}

SgdMomentum::SgdMomentum(const MlpModel &model) {
  for (const auto &l : model.layers())
    velocity_.push_back({Matrix::Zero(l.weights.rows(), l.weights.cols()),
                         Vector::Zero(l.bias.size())});
}

void SgdMomentum::Step(MlpModel *model,
                       const std::vector<LayerGradient> &grads,
                       Real learning_rate, Real momentum) {
  if (grads.size() != velocity_.size())
    throw ShapeError("gradient has the wrong number of layers");
  for (size_t l = 0; l < grads.size(); l++) {
    auto &v = velocity_[l];
    v.weights = momentum * v.weights - learning_rate * grads[l].weights;
    v.bias = momentum * v.bias - learning_rate * grads[l].bias;
    model->layer(l).weights += v.weights;
    model->layer(l).bias += v.bias;
  }
}

GradientCheckReport GradientCheck(const MlpModel &model, const Matrix &inputs,
                                  const Matrix &targets, LossKind kind,
                                  const GradientCheckOptions &opts,
                                  GradientFunction gradient_fn) {
  if (!gradient_fn)
    gradient_fn = [](const MlpModel &m, const Matrix &x, const Matrix &t,
                     LossKind k) { return LossAndGradient(m, x, t, k); };
  LossGradient analytic = gradient_fn(model, inputs, targets, kind);

  MlpModel probe = model;
  Rng rng(opts.seed);
  GradientCheckReport report;

  auto check = [&](Real *param, Real grad, const std::string &name) {
    const Real saved = *param;
    *param = saved + opts.step;
    Real plus = ComputeLoss(probe, inputs, targets, kind);
    *param = saved - opts.step;
    Real minus = ComputeLoss(probe, inputs, targets, kind);
    *param = saved;
    Real numeric = (plus - minus) / (2.0 * opts.step);
    Real denom = std::max({std::abs(grad), std::abs(numeric), 1e-6});
    Real rel = std::abs(grad - numeric) / denom;
    report.num_checked++;
    if (rel > report.max_relative_error || report.worst_parameter.empty()) {
      report.max_relative_error = std::max(report.max_relative_error, rel);
      report.worst_parameter = name;
    }
  };

  auto pick = [&](Eigen::Index count) {
    std::vector<Eigen::Index> idx(static_cast<size_t>(count));
    std::iota(idx.begin(), idx.end(), 0);
    if (opts.samples_per_tensor > 0 && count > opts.samples_per_tensor) {
      std::shuffle(idx.begin(), idx.end(), rng);
      idx.resize(static_cast<size_t>(opts.samples_per_tensor));
      std::sort(idx.begin(), idx.end());
    }
    return idx;
  };

  for (size_t l = 0; l < probe.NumLayers(); l++) {
    DenseLayer &layer = probe.layer(l);
    const auto &g = analytic.grads[l];
    for (Eigen::Index i : pick(layer.weights.size()))
      check(layer.weights.data() + i, g.weights.data()[i],
            "layer" + std::to_string(l) + ".weights[" + std::to_string(i) +
                "]");
    for (Eigen::Index i : pick(layer.bias.size()))
      check(layer.bias.data() + i, g.bias(i),
            "layer" + std::to_string(l) + ".bias[" + std::to_string(i) + "]");
  }
  report.passed = report.max_relative_error < opts.tolerance;
  return report;
}

MatrixBatchSource::MatrixBatchSource(const Matrix &inputs,
                                     const Matrix &targets)
    : inputs_(inputs), targets_(targets) {
  if (inputs.cols() != targets.cols())
    throw ShapeError("inputs and targets differ in sample count");
}

void MatrixBatchSource::Fill(std::span<const size_t> indices, Matrix *inputs,
                             Matrix *targets) const {
  const auto n = static_cast<Eigen::Index>(indices.size());
  inputs->resize(inputs_.rows(), n);
  targets->resize(targets_.rows(), n);
  for (Eigen::Index j = 0; j < n; j++) {
    auto src = static_cast<Eigen::Index>(indices[static_cast<size_t>(j)]);
    inputs->col(j) = inputs_.col(src);
    targets->col(j) = targets_.col(src);
  }
}

Real EvaluateLoss(const MlpModel &model, const BatchSource &source,
                  LossKind kind, size_t batch_size) {
  const size_t n = source.Size();
  if (n == 0) return std::numeric_limits<Real>::quiet_NaN();
  std::vector<size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  Matrix x, t;
  Real total = 0.0;
  for (size_t start = 0; start < n; start += batch_size) {
    size_t len = std::min(batch_size, n - start);
    source.Fill(std::span<const size_t>(idx).subspan(start, len), &x, &t);
    total += ComputeLoss(model, x, t, kind) * static_cast<Real>(len);
  }
  return total / static_cast<Real>(n);
}

TrainingHistory TrainMlp(MlpModel *model, const BatchSource &train,
                         const BatchSource *valid, LossKind kind,
                         const TrainingOptions &opts, uint64_t seed) {
  if (opts.batch_size < 1) throw ConfigError("batch size must be >= 1");
  if (opts.max_epochs < 0) throw ConfigError("epoch budget must be >= 0");
  if (train.InputDim() != model->InputDim() ||
      train.TargetDim() != model->OutputDim())
    throw ShapeError("training data does not match the model's dimensions");

  TrainingHistory history;
  if (opts.max_epochs == 0 || train.Size() == 0) return history;

  const bool early_stopping =
      valid != nullptr && valid->Size() > 0 && opts.patience > 0;
  Rng rng(seed);
  SgdMomentum sgd(*model);
  std::vector<size_t> order(train.Size());
  std::iota(order.begin(), order.end(), 0);

  MlpModel best = *model;
  Real best_loss = early_stopping ? EvaluateLoss(*model, *valid, kind)
                                  : std::numeric_limits<Real>::infinity();
  int since_best = 0;
  const auto batch = static_cast<size_t>(opts.batch_size);
  Matrix x, t;

  for (int epoch = 1; epoch <= opts.max_epochs; epoch++) {
    std::shuffle(order.begin(), order.end(), rng);
    Real sum = 0.0;
    for (size_t start = 0; start < order.size(); start += batch) {
      size_t len = std::min(batch, order.size() - start);
      train.Fill(std::span<const size_t>(order).subspan(start, len), &x, &t);
      LossGradient lg;
      try {
        lg = LossAndGradient(*model, x, t, kind, &rng);
      } catch (const NumericError &e) {
        throw NumericError("training diverged at epoch " +
                           std::to_string(epoch) + ", batch starting at " +
                           std::to_string(start) + ": " + e.what());
      }
      sgd.Step(model, lg.grads, opts.learning_rate, opts.momentum);
      sum += lg.loss * static_cast<Real>(len);
    }
    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = sum / static_cast<Real>(order.size());
    if (valid != nullptr && valid->Size() > 0)
      rec.valid_loss = EvaluateLoss(*model, *valid, kind);
    history.epochs.push_back(rec);
    spdlog::debug("epoch {}: train {} {:.6f}, valid {:.6f}", epoch,
                  LossKindName(kind), rec.train_loss, rec.valid_loss);

    if (early_stopping) {
      if (rec.valid_loss < best_loss) {
        best_loss = rec.valid_loss;
        best = *model;
        history.best_epoch = epoch;
        since_best = 0;
      } else if (++since_best >= opts.patience) {
        history.stopped_early = true;
        break;
      }
    } else {
      history.best_epoch = epoch;
    }
  }
  if (early_stopping) *model = std::move(best);
  return history;
}

}  // namespace audiotag
