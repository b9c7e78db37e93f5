// unit/baselines-test.cc

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

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "audiotag/baselines/gmm.h"
#include "audiotag/baselines/svm.h"
#include "mil-fixture.h"
#include "synthetic-corpus.h"

namespace audiotag {
namespace {

Matrix Gaussian(Eigen::Index n, Eigen::Index d, uint64_t seed, Real mean = 0.0,
                Real sd = 1.0) {
  Rng rng(seed);
  std::normal_distribution<double> g(mean, sd);
  Matrix m(n, d);
  for (Eigen::Index i = 0; i < m.size(); i++) m.data()[i] = g(rng);
  return m;
}

Matrix TwoComponent1d(int n, uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::bernoulli_distribution pick(0.5);
  Matrix x(n, 1);
  for (int i = 0; i < n; i++) x(i, 0) = g(rng) + (pick(rng) ? 5.0 : 0.0);
  return x;
}

TEST(GmmTest, SingleComponentIsSampleMoments) {
  Matrix x = Gaussian(500, 3, 1, 2.0, 1.5);
  EmOptions o;
  o.num_components = 1;
  o.iterations = 3;
  EmResult r = EmFit(x, o);
  RowVector mean = x.colwise().mean();
  RowVector var = (x.rowwise() - mean).array().square().colwise().mean();
  EXPECT_NEAR(r.gmm.weights(0), 1.0, 1e-12);
  EXPECT_LT((r.gmm.means.row(0) - mean).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT((r.gmm.variances.row(0) - var).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(GmmTest, RecoversTwoComponentMeans) {
  EmOptions o;
  o.num_components = 2;
  o.iterations = 50;
  o.seed = 3;
  EmResult r = EmFit(TwoComponent1d(2000, 2), o);
  Real lo = std::min(r.gmm.means(0, 0), r.gmm.means(1, 0));
  Real hi = std::max(r.gmm.means(0, 0), r.gmm.means(1, 0));
  EXPECT_NEAR(lo, 0.0, 0.2);
  EXPECT_NEAR(hi, 5.0, 0.2);
  EXPECT_NEAR(r.gmm.weights.sum(), 1.0, 1e-12);
}

TEST(GmmTest, ZeroIterationsReturnsKMeansInit) {
  Matrix x = Gaussian(300, 2, 4);
  EmOptions o;
  o.num_components = 4;
  o.iterations = 0;
  o.seed = 9;
  EmResult r = EmFit(x, o);
  DiagGmm k = KMeansInit(x, o);
  EXPECT_EQ(r.gmm.weights, k.weights);
  EXPECT_EQ(r.gmm.means, k.means);
  EXPECT_EQ(r.gmm.variances, k.variances);
  EXPECT_EQ(r.log_likelihood.size(), 1u);
  EXPECT_THROW(KMeansInit(x.topRows(3), o), DataError);
}

TEST(GmmTest, EmLogLikelihoodNeverDecreases) {
  for (uint64_t s = 0; s < 20; s++) {
    Matrix x(400, 2);
    x << Gaussian(200, 2, 100 + s, -1.0, 0.7), Gaussian(200, 2, 200 + s, 1.5, 1.2);
    EmOptions o;
    o.num_components = 3;
    o.iterations = 15;
    o.seed = s;
    EmResult r = EmFit(x, o);
    ASSERT_EQ(r.log_likelihood.size(), 16u);
    for (size_t i = 1; i < r.log_likelihood.size(); i++)
      EXPECT_GE(r.log_likelihood[i], r.log_likelihood[i - 1] - 1e-12)
          << "dataset " << s << " iteration " << i;
  }
}

TEST(GmmTest, DensityIntegratesToOne) {
  EmOptions o;
  o.num_components = 3;
  o.iterations = 10;
  EmResult r = EmFit(TwoComponent1d(500, 5), o);
  const int n = 20001;
  const Real lo = -15.0, hi = 20.0, h = (hi - lo) / (n - 1);
  Matrix grid(n, 1);
  for (int i = 0; i < n; i++) grid(i, 0) = lo + i * h;
  Vector f = r.gmm.FrameLogLikelihoods(grid).array().exp();
  // Trapezoid rule.
  Real integral = h * (f.sum() - 0.5 * (f(0) + f(n - 1)));
  EXPECT_NEAR(integral, 1.0, 1e-3);
}

DiagGmm HandGmm() {
  DiagGmm g;
  g.weights = Vector{{0.25, 0.75}};
  g.means.resize(2, 2);
  g.means << 0.0, 1.0, 2.0, -1.0;
  g.variances.resize(2, 2);
  g.variances << 1.0, 0.5, 2.0, 1.0;
  return g;
}

Real HandLogDensity(const DiagGmm &g, Real x0, Real x1) {
  Real total = 0.0;
  for (int m = 0; m < 2; m++) {
    Real p = g.weights(m);
    Real xs[2] = {x0, x1};
    for (int d = 0; d < 2; d++) {
      Real v = g.variances(m, d), z = xs[d] - g.means(m, d);
      p *= std::exp(-0.5 * z * z / v) / std::sqrt(2.0 * std::numbers::pi * v);
    }
    total += p;
  }
  return std::log(total);
}

GmmTagModel HandTagModel() {
  GmmTagModel t;
  DiagGmm neg = HandGmm();
  neg.means.array() += 0.5;
  for (int k = 0; k < kNumTags; k++) {
    t.positive[k] = HandGmm();
    t.negative[k] = neg;
  }
  return t;
}

TEST(GmmScoreTest, SingleFrameAgainstHandDensity) {
  GmmTagModel t = HandTagModel();
  Matrix frame(1, 2);
  frame << 0.3, -0.4;
  Vector s = GmmTagScores(t, frame);
  Real expected = HandLogDensity(t.positive[0], 0.3, -0.4) -
                  HandLogDensity(t.negative[0], 0.3, -0.4);
  for (int k = 0; k < kNumTags; k++) EXPECT_NEAR(s(k), expected, 1e-12);
}

TEST(GmmScoreTest, IdenticalModelsScoreZeroAndFramesAdd) {
  GmmTagModel t = HandTagModel();
  Matrix x = Gaussian(7, 2, 6);
  Vector s = GmmTagScores(t, x);
  Matrix twice(14, 2);
  twice << x, x;
  EXPECT_LT((GmmTagScores(t, twice) - 2.0 * s).cwiseAbs().maxCoeff(), 1e-9);
  t.negative = t.positive;
  EXPECT_EQ(GmmTagScores(t, x).cwiseAbs().maxCoeff(), 0.0);
}

TEST(GmmScoreTest, JointShiftLeavesScoresUnchanged) {
  GmmTagModel t = HandTagModel(), shifted = t;
  for (int k = 0; k < kNumTags; k++) {
    shifted.positive[k].means.array() += 3.0;
    shifted.negative[k].means.array() += 3.0;
  }
  Matrix x = Gaussian(5, 2, 7);
  Matrix xs = x.array() + 3.0;
  EXPECT_LT((GmmTagScores(t, x) - GmmTagScores(shifted, xs)).cwiseAbs().maxCoeff(),
            1e-9);
}

TEST(GmmTagModelTest, TrainsSaveLoad) {
  std::vector<FeatureMatrix> chunks(4);
  std::vector<TagSet> tags(4);
  for (int i = 0; i < 4; i++) {
    chunks[i].values = Gaussian(50, 2, 20 + i, i % 2 == 0 ? 2.0 : -2.0);
    for (int k = 0; k < kNumTags; k++) tags[i].Set(k, (i + k) % 2 == 0);
  }
  EmOptions o;
  o.num_components = 2;
  o.iterations = 5;
  std::vector<TagSet> all_c = tags;
  for (auto &t : all_c) t.Set(TagIndex('c'));
  EXPECT_THROW(TrainGmmTagModel(chunks, all_c, o), DataError);
  GmmTagModel m = TrainGmmTagModel(chunks, tags, o);
  Vector s0 = GmmTagScores(m, chunks[0].values);
  Vector s1 = GmmTagScores(m, chunks[1].values);
  EXPECT_GT(s0(0), 0.0);
  EXPECT_LT(s1(0), 0.0);
  testing::ScratchDir dir("gmm");
  m.Save(dir / "g.model");
  GmmTagModel back = GmmTagModel::Load(dir / "g.model");
  EXPECT_EQ(GmmTagScores(back, chunks[2].values), GmmTagScores(m, chunks[2].values));
  EXPECT_EQ(StackFrames(chunks).rows(), 200);
  std::vector<size_t> which = {1, 3};
  EXPECT_EQ(StackFrames(chunks, which).row(50), chunks[3].values.row(0));
}

// Independent solver: subgradient descent on (w, b) with step 1 / sqrt(t),
// keeping the best objective seen.
Real SubgradientReference(const Matrix &x, const std::vector<int> &y, Real A,
                          int iterations) {
  Vector w = Vector::Zero(x.cols());
  Real b = 0.0;
  Real best = SvmObjective(w, b, x, y, A);
  for (int t = 1; t <= iterations; t++) {
    Vector gw = w;
    Real gb = 0.0;
    for (Eigen::Index i = 0; i < x.rows(); i++) {
      if (y[i] * (x.row(i).dot(w) + b) < 1.0) {
        gw -= A * y[i] * x.row(i).transpose();
        gb -= A * y[i];
      }
    }
    Real step = 0.05 / std::sqrt(static_cast<Real>(t));
    w -= step * gw;
    b -= step * gb;
    best = std::min(best, SvmObjective(w, b, x, y, A));
  }
  return best;
}

void TwentyPoints(Matrix *x, std::vector<int> *y) {
  *x = Gaussian(20, 2, 31);
  y->resize(20);
  for (int i = 0; i < 20; i++) {
    (*y)[i] = i % 2 == 0 ? 1 : -1;
    x->row(i) += RowVector{{(*y)[i] * 0.8, 0.3}};
  }
}

TEST(SvmTest, MatchesSubgradientReferenceObjective) {
  Matrix x;
  std::vector<int> y;
  TwentyPoints(&x, &y);
  SvmOptions o;
  o.tolerance = 1e-6;
  o.epochs = 5000;
  LinearSvmModel m = LinearSvmFit(x, y, o);
  Real ref = SubgradientReference(x, y, 1.0, 200000);
  EXPECT_LE(m.objective, 1.01 * ref) << "reference " << ref;
  EXPECT_NEAR(m.objective, SvmObjective(m.w, m.b, x, y, 1.0), 1e-12);
  Vector scores = x * m.w;
  Real b = OptimalBias(scores, y);
  EXPECT_LE(SvmObjective(m.w, b, x, y, 1.0), m.objective + 1e-12);
}

TEST(SvmTest, SeparableDataHasNoViolationsWhenAIsLarge) {
  Matrix x(40, 2);
  std::vector<int> y(40);
  Matrix g = Gaussian(40, 2, 32, 0.0, 0.3);
  for (int i = 0; i < 40; i++) {
    y[i] = i < 20 ? 1 : -1;
    x.row(i) = g.row(i) + RowVector{{y[i] * 2.0, 0.0}};
  }
  SvmOptions o;
  o.A = 1e6;
  o.tolerance = 1e-6;
  o.epochs = 2000;
  LinearSvmModel m = LinearSvmFit(x, y, o);
  EXPECT_EQ(m.num_violations, 0);
  for (int i = 0; i < 40; i++) EXPECT_GT(y[i] * m.Margin(x.row(i).transpose()), 0.0);
  std::vector<int> one(40, 1);
  EXPECT_THROW(LinearSvmFit(x, one, o), DataError);
}

TEST(SvmTest, OptimalBiasBeatsNeighbours) {
  Vector s = Gaussian(30, 1, 33).col(0);
  std::vector<int> y(30);
  for (int i = 0; i < 30; i++) y[i] = s(i) + 0.3 * std::sin(i) > 0 ? 1 : -1;
  Real b = OptimalBias(s, y);
  auto obj = [&](Real bb) {
    Real h = 0.0;
    for (int i = 0; i < 30; i++) h += std::max(0.0, 1.0 - y[i] * (s(i) + bb));
    return h;
  };
  for (Real d = -1.0; d <= 1.0; d += 0.01) EXPECT_LE(obj(b), obj(b + d) + 1e-12);
}

TEST(MisvmTest, ToySetSelectsPositiveSideInstances) {
  auto bags = testing::ToyMilBags();
  MisvmResult r = MisvmTrain(bags, {});
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.outer_iterations, 10);
  for (size_t i = 0; i < bags.size(); i++) {
    if (bags[i].label > 0) {
      ASSERT_GE(r.representatives[i], 0);
      ASSERT_LT(r.representatives[i], bags[i].instances.rows());
      EXPECT_EQ(r.representatives[i], 3) << bags[i].id;
    } else {
      EXPECT_EQ(r.representatives[i], -1);
    }
    Real s = BagScore(r.model, bags[i].instances);
    EXPECT_EQ(s > 0.0, bags[i].label > 0) << bags[i].id;
  }
  for (size_t i = 1; i < r.objective_history.size(); i++)
    EXPECT_LE(r.objective_history[i], r.objective_history[i - 1] + 1e-9);
}

TEST(MisvmTest, SingleInstanceBagsStopAfterOneRound) {
  std::vector<MilBag> bags;
  for (int i = 0; i < 6; i++) {
    MilBag b;
    b.label = i % 2 == 0 ? 1 : -1;
    b.instances = RowVector{{b.label * 1.0 + 0.1 * i, 0.2 * i}};
    bags.push_back(b);
  }
  MisvmResult r = MisvmTrain(bags, {});
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.outer_iterations, 2);
}

TEST(ChunkSvmFeaturesTest, MeanAndCovariance) {
  FeatureMatrix flat;
  flat.values = Matrix::Constant(10, 3, 1.5);
  Vector v = ChunkSvmFeatures(flat);
  ASSERT_EQ(v.size(), 3 + 6);
  EXPECT_TRUE((v.head(3).array() == 1.5).all());
  EXPECT_LT(v.tail(6).cwiseAbs().maxCoeff(), 1e-15);

  FeatureMatrix two;
  two.values.resize(2, 2);
  two.values << 1.0, 2.0, 3.0, 6.0;
  Vector t = ChunkSvmFeatures(two);
  // Mean (2, 4); population covariance [[1, 2], [2, 4]].
  Vector expected{{2.0, 4.0, 1.0, 2.0, 4.0}};
  EXPECT_LT((t - expected).cwiseAbs().maxCoeff(), 1e-15);

  FeatureMatrix mfcc;
  mfcc.values = Gaussian(399, 24, 34);
  EXPECT_EQ(ChunkSvmFeatures(mfcc).size(), 324);
}

TEST(SvmTagModelTest, ChunkSvmSaveLoad) {
  std::vector<FeatureMatrix> chunks(12);
  std::vector<TagSet> tags(12);
  for (int i = 0; i < 12; i++) {
    chunks[i].values = Gaussian(20, 2, 40 + i, i % 3 == 0 ? 1.0 : -1.0);
    for (int k = 0; k < kNumTags; k++) tags[i].Set(k, (i + k) % 3 == 0);
  }
  SvmTagModel m = TrainChunkSvm(chunks, tags, {});
  testing::ScratchDir dir("svm");
  m.Save(dir / "s.model");
  SvmTagModel back = SvmTagModel::Load(dir / "s.model");
  EXPECT_EQ(SvmTagScores(back, chunks[5]), SvmTagScores(m, chunks[5]));
  EXPECT_GT(SvmTagScores(m, chunks[0])(0), SvmTagScores(m, chunks[1])(0));
}

}  // namespace
}  // namespace audiotag
