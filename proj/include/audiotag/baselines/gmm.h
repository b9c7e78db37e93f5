// baselines/gmm.h

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

#ifndef AUDIOTAG_BASELINES_GMM_H_
#define AUDIOTAG_BASELINES_GMM_H_

#include <array>
#include <span>
#include <string>
#include <vector>

#include "audiotag/feat/feature-matrix.h"
#include "audiotag/io/tag-set.h"

namespace audiotag {

// Diagonal-covariance Gaussian mixture.  Frames are rows.
struct DiagGmm {
  Vector weights;     // M, on the simplex
  Matrix means;       // M x D
  Matrix variances;   // M x D, every entry >= the fitting floor

  Eigen::Index NumComponents() const { return weights.size(); }
  Eigen::Index Dim() const { return means.cols(); }

  // ShapeError / NumericError on inconsistent or invalid parameters.
  void Validate() const;

  // log f(x_n) for every row, via log-sum-exp over components.
  Vector FrameLogLikelihoods(const Matrix &frames) const;
  // Per-component log(w_m N(x_n; mu_m, var_m)), N x M.
  Matrix ComponentLogDensities(const Matrix &frames) const;
  Real TotalLogLikelihood(const Matrix &frames) const {
    return FrameLogLikelihoods(frames).sum();
  }
};

struct EmOptions {
  int num_components = 8;
  int iterations = 20;
  Real variance_floor = 1e-6;
  // Lloyd iterations after k-means++ seeding.
  int kmeans_iterations = 10;
  // Stop once the mean per-frame log-likelihood improves by less than this;
  // 0 always runs the full budget.
  Real tolerance = 0.0;
  uint64_t seed = 0;
};

struct EmResult {
  DiagGmm gmm;
  // Mean per-frame log-likelihood of the initial model and after every
  // iteration (iterations + 1 entries unless stopped by tolerance).
  std::vector<Real> log_likelihood;
  bool converged = false;
};

// k-means++ seeding and Lloyd iterations; weights are cluster fractions,
// variances within-cluster (floored; empty clusters take the global
// variance).  DataError with fewer frames than components.
DiagGmm KMeansInit(const Matrix &frames, const EmOptions &opts);

// EM from KMeansInit.  A component whose responsibility mass vanishes keeps
// its parameters at weight zero.
EmResult EmFit(const Matrix &frames, const EmOptions &opts);

// Per-tag pair of mixtures: one on frames of chunks carrying the tag, one on
// frames of all other chunks.
struct GmmTagModel {
  std::array<DiagGmm, kNumTags> positive;
  std::array<DiagGmm, kNumTags> negative;
  FeatureKind features = FeatureKind::kMfcc24;
  EmOptions options;

  void Save(const std::string &path) const;
  static GmmTagModel Load(const std::string &path);
};

// Stacks the frames of the given chunks (all chunks when `which` is empty).
Matrix StackFrames(std::span<const FeatureMatrix> chunks,
                   std::span<const size_t> which = {});

GmmTagModel TrainGmmTagModel(std::span<const FeatureMatrix> chunks,
                             std::span<const TagSet> tags,
                             const EmOptions &opts);
// Only tag `tag`; the other slots stay empty.
void TrainGmmForTag(std::span<const FeatureMatrix> chunks,
                    std::span<const TagSet> tags, int tag,
                    const EmOptions &opts, GmmTagModel *model);

// sum_n log f(x_n | pos_k) - sum_n log f(x_n | neg_k) for every tag.
Vector GmmTagScores(const GmmTagModel &model, const Matrix &frames);

}  // namespace audiotag

#endif  // AUDIOTAG_BASELINES_GMM_H_
