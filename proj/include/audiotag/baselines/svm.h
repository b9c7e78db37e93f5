// baselines/svm.h

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

#ifndef AUDIOTAG_BASELINES_SVM_H_
#define AUDIOTAG_BASELINES_SVM_H_

#include <array>
#include <span>
#include <string>
#include <vector>

#include "audiotag/feat/norm-stats.h"
#include "audiotag/io/tag-set.h"

namespace audiotag {

// f(x) = <w, x> + b, fitted to
//
//   min_{w,b}  1/2 ||w||^2 + A sum_i max(0, 1 - y_i f(x_i)).
struct LinearSvmModel {
  Vector w;
  Real b = 0.0;
  Real A = 1.0;
  Real objective = 0.0;      // value of the problem above at (w, b)
  Real total_slack = 0.0;    // sum of hinge terms
  int num_violations = 0;    // samples with y f(x) < 1

  Real Margin(const Eigen::Ref<const Vector> &x) const { return w.dot(x) + b; }
  // Margins of the rows of `x`.
  Vector Margins(const Matrix &x) const {
    return (x * w).array() + b;
  }
};

struct SvmOptions {
  Real A = 1.0;
  int epochs = 200;          // passes over the data at most
  Real tolerance = 1e-3;     // stop when the projected-gradient spread is below
  uint64_t seed = 0;
};

// Objective of (w, b) on rows `x` with labels in {-1, +1}.
Real SvmObjective(const Vector &w, Real b, const Matrix &x,
                  std::span<const int> y, Real A);

// For fixed w, the b minimising the objective (exact; the objective is
// piecewise linear in b).
Real OptimalBias(const Vector &scores, std::span<const int> y);

// Per-sample dual coordinate descent in a seeded epoch order, with the bias
// carried as the weight of a constant feature.  After every epoch the bias
// is also re-optimised exactly, and the best (w, b) seen by the exact
// objective is returned.  DataError on single-class input.
LinearSvmModel LinearSvmFit(const Matrix &x, std::span<const int> y,
                            const SvmOptions &opts);

struct MilBag {
  std::string id;
  Matrix instances;  // one instance per row
  int label = -1;    // +1 or -1
};

struct MisvmOptions {
  SvmOptions svm;
  int max_outer_iterations = 10;
};

struct MisvmResult {
  LinearSvmModel model;
  // Per bag: index of the selected instance for positive bags (-1 while the
  // centroid is in use) and -1 for negative bags.
  std::vector<Eigen::Index> representatives;
  // SVM objective after each outer iteration.
  std::vector<Real> objective_history;
  int outer_iterations = 0;
  bool converged = false;
};

// Positive representatives start at the bag centroids.  Each round trains a
// linear SVM on the positive representatives and every negative instance,
// then moves each representative to its bag's highest-scoring instance,
// until no representative changes.  At the iteration cap the model with the
// lowest objective is returned and `converged` stays false.
MisvmResult MisvmTrain(std::span<const MilBag> bags, const MisvmOptions &opts);

// max_j f(x_j).
Real BagScore(const LinearSvmModel &m, const Matrix &instances);

// Mean of the frames followed by the upper triangle (row by row, diagonal
// included) of their population covariance: D + D (D + 1) / 2 values.
Vector ChunkSvmFeatures(const FeatureMatrix &m);

// Linear SVMs for the seven tags on normalized inputs.
struct SvmTagModel {
  enum class Kind { kChunk, kMultiInstance };
  Kind kind = Kind::kChunk;
  FeatureKind features = FeatureKind::kMfcc24;
  NormStats norm;  // of chunk vectors (kChunk) or frames (kMultiInstance)
  std::array<LinearSvmModel, kNumTags> tags;
  MisvmOptions options;

  void Save(const std::string &path) const;
  static SvmTagModel Load(const std::string &path);
};

SvmTagModel TrainChunkSvm(std::span<const FeatureMatrix> chunks,
                          std::span<const TagSet> tags,
                          const SvmOptions &opts);
SvmTagModel TrainMisvm(std::span<const FeatureMatrix> chunks,
                       std::span<const TagSet> tags, const MisvmOptions &opts);

// Signed margins used as ranking scores, one per tag.
Vector SvmTagScores(const SvmTagModel &model, const FeatureMatrix &chunk);

}  // namespace audiotag

#endif  // AUDIOTAG_BASELINES_SVM_H_
