// unit/feat-test.cc

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
#include <complex>
#include <fstream>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "audiotag/feat/context-window.h"
#include "audiotag/feat/feature-cache.h"
#include "audiotag/feat/framing.h"
#include "audiotag/feat/mel-features.h"
#include "audiotag/feat/norm-stats.h"
#include "synthetic-corpus.h"

namespace audiotag {
namespace {

constexpr double kPi = std::numbers::pi;

std::vector<Real> WhiteNoise(size_t n, double sigma, uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> g(0.0, sigma);
  std::vector<Real> x(n);
  for (auto &v : x) v = g(rng);
  return x;
}

// |X_k|^2 by direct summation of the zero-padded DFT.
std::vector<Real> NaivePower(std::span<const Real> frame, int n_fft) {
  std::vector<Real> p(static_cast<size_t>(n_fft / 2 + 1));
  for (int k = 0; k <= n_fft / 2; k++) {
    std::complex<double> acc = 0.0;
    for (size_t n = 0; n < frame.size(); n++)
      acc += frame[n] * std::polar(1.0, -2.0 * kPi * k * n / n_fft);
    p[static_cast<size_t>(k)] = std::norm(acc);
  }
  return p;
}

// Triangle m of an HTK-style bank, written out from the definition.
double NaiveTriangle(int m, double f, int bins, double lo, double hi) {
  auto mel = [](double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); };
  auto hz = [](double m) { return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0); };
  double step = (mel(hi) - mel(lo)) / (bins + 1);
  double l = hz(mel(lo) + m * step), c = hz(mel(lo) + (m + 1) * step),
         r = hz(mel(lo) + (m + 2) * step);
  if (f > l && f <= c) return (f - l) / (c - l);
  if (f > c && f < r) return (r - f) / (r - c);
  return 0.0;
}

TEST(FramingTest, FrameCounts) {
  EXPECT_EQ(NumFrames(64000), 399);
  EXPECT_EQ(NumFrames(320), 1);
  EXPECT_EQ(NumFrames(1000), 5);
  EXPECT_EQ(NumFrames(319), 0);
  std::vector<Real> x(64000, 0.0);
  EXPECT_EQ(FrameSignal(x).rows(), 399);
  std::vector<Real> tiny(100, 0.0);
  EXPECT_THROW(FrameSignal(tiny), DataError);
}

TEST(FramingTest, CountMatchesClosedFormForAllLengths) {
  for (size_t len = 320; len <= 4000; len += 7) {
    Eigen::Index expect = 1 + static_cast<Eigen::Index>((len - 320) / 160);
    ASSERT_EQ(NumFrames(len), expect) << len;
  }
  FrameOptions o{400, 100, false};
  for (size_t len = 400; len <= 3000; len += 13)
    ASSERT_EQ(NumFrames(len, o), 1 + static_cast<Eigen::Index>((len - 400) / 100));
}

TEST(FramingTest, FramesAreTaperedSlices) {
  auto x = WhiteNoise(1000, 0.1, 3);
  Matrix f = FrameSignal(x);
  ASSERT_EQ(f.rows(), 5);
  ASSERT_EQ(f.cols(), 320);
  for (int t = 0; t < 5; t++)
    for (int i = 0; i < 320; i++) {
      double w = 0.54 - 0.46 * std::cos(2.0 * kPi * i / 319.0);
      ASSERT_NEAR(f(t, i), x[static_cast<size_t>(t * 160 + i)] * w, 1e-12);
    }
}

TEST(MelTest, PowerSpectrumMatchesNaiveDft) {
  auto x = WhiteNoise(320, 0.3, 4);
  Matrix frames = Eigen::Map<const RowVector>(x.data(), 320);
  Matrix p = PowerSpectrum(frames, 512);
  auto oracle = NaivePower(x, 512);
  ASSERT_EQ(p.cols(), 257);
  for (int k = 0; k < 257; k++)
    ASSERT_NEAR(p(0, k), oracle[static_cast<size_t>(k)],
                1e-9 * (1.0 + oracle[static_cast<size_t>(k)]));
}

TEST(MelTest, FilterbankMatchesDefinition) {
  MelFilterbank bank;
  for (int m = 0; m < 40; m++)
    for (int k = 0; k < 257; k++)
      ASSERT_NEAR(bank.weights()(m, k),
                  NaiveTriangle(m, k * 16000.0 / 512, 40, 0.0, 8000.0), 1e-12);
}

TEST(MelTest, SilenceIsTheLogFloor) {
  std::vector<Real> x(64000, 0.0);
  FeatureMatrix m = ExtractFeatures({x, 16000}, FeatureKind::kMbk40, "s");
  ASSERT_EQ(m.values.rows(), 399);
  ASSERT_EQ(m.values.cols(), 40);
  // Vectorized log may differ from std::log in the last place.
  EXPECT_NEAR(m.values.minCoeff(), std::log(1e-10), 1e-12);
  EXPECT_NEAR(m.values.maxCoeff(), std::log(1e-10), 1e-12);
  FeatureMatrix c = ExtractFeatures({x, 16000}, FeatureKind::kMfcc24, "s");
  ASSERT_EQ(c.values.cols(), 24);
  for (Eigen::Index t = 1; t < c.values.rows(); t++)
    ASSERT_LT((c.values.row(t) - c.values.row(0)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(MelTest, DoublingAmplitudeAddsLogFour) {
  auto x = WhiteNoise(16000, 0.05, 5);
  std::vector<Real> y(x);
  for (auto &v : y) v *= 2.0;
  FeatureMatrix a = ExtractFeatures({x, 16000}, FeatureKind::kMbk40, "a");
  FeatureMatrix b = ExtractFeatures({y, 16000}, FeatureKind::kMbk40, "b");
  Matrix d = b.values - a.values;
  EXPECT_NEAR(d.minCoeff(), std::log(4.0), 1e-6);
  EXPECT_NEAR(d.maxCoeff(), std::log(4.0), 1e-6);
}

TEST(MelTest, CentredSineLandsInItsFilter) {
  MelFilterbank bank;
  for (int m : {5, 17, 30}) {
    int bin = static_cast<int>(std::lround(bank.center_hz()(m) * 512 / 16000.0));
    double f = bin * 16000.0 / 512;
    std::vector<Real> s(320);
    for (int n = 0; n < 320; n++) s[n] = std::sin(2.0 * kPi * f * n / 16000.0);
    Matrix frame = Eigen::Map<const RowVector>(s.data(), 320);
    FeatureMatrix mbk = ComputeMbk(frame);
    Eigen::Index arg;
    mbk.values.row(0).maxCoeff(&arg);
    EXPECT_EQ(arg, m);
    // Direct inner product of the naive spectrum with the naive triangle.
    auto p = NaivePower(s, 512);
    double e = 0.0;
    for (int k = 0; k < 257; k++)
      e += NaiveTriangle(m, k * 16000.0 / 512, 40, 0.0, 8000.0) * p[k];
    EXPECT_NEAR(mbk.values(0, m), std::log(e), 1e-9);
  }
}

TEST(MfccTest, ConstantLogMelHasOnlyC0) {
  Matrix dct = DctMatrix(24, 40);
  Vector c = dct * Vector::Constant(40, -3.7);
  EXPECT_NEAR(c(0), -3.7 * std::sqrt(40.0), 1e-9);
  for (int j = 1; j < 24; j++) EXPECT_NEAR(c(j), 0.0, 1e-12);
}

TEST(MfccTest, MatchesNaiveDct) {
  Rng rng(9);
  std::uniform_real_distribution<double> u(-10, 5);
  Vector x(40);
  for (int i = 0; i < 40; i++) x(i) = u(rng);
  Vector c = DctMatrix(24, 40) * x;
  for (int j = 0; j < 24; j++) {
    double acc = 0.0;
    for (int n = 0; n < 40; n++)
      acc += x(n) * std::cos(kPi * j * (2 * n + 1) / 80.0);
    acc *= j == 0 ? std::sqrt(1.0 / 40) : std::sqrt(2.0 / 40);
    EXPECT_NEAR(c(j), acc, 1e-9);
  }
}

TEST(MelTest, ExtractionIsDeterministic) {
  auto x = WhiteNoise(64000, 0.1, 6);
  FeatureMatrix a = ExtractFeatures({x, 16000}, FeatureKind::kMfcc24, "a");
  FeatureMatrix b = ExtractFeatures({x, 16000}, FeatureKind::kMfcc24, "a");
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.chunk_id, "a");
  EXPECT_THROW(ExtractFeatures({x, 8000}, FeatureKind::kMbk40, "x"), DataError);
}

FeatureMatrix FromRows(std::initializer_list<std::initializer_list<Real>> rows) {
  FeatureMatrix m;
  m.values.resize(static_cast<Eigen::Index>(rows.size()),
                  static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index r = 0;
  for (const auto &row : rows) {
    Eigen::Index c = 0;
    for (Real v : row) m.values(r, c++) = v;
    r++;
  }
  return m;
}

TEST(NormTest, TwoFrameCorpus) {
  std::vector<FeatureMatrix> corpus = {FromRows({{0.0}, {2.0}})};
  NormStats s = FitNormStats(corpus);
  EXPECT_DOUBLE_EQ(s.mean(0), 1.0);
  EXPECT_DOUBLE_EQ(s.stddev(0), 1.0);
  FeatureMatrix n = ApplyNorm(corpus[0], s);
  EXPECT_DOUBLE_EQ(n.values(0, 0), -1.0);
  EXPECT_DOUBLE_EQ(n.values(1, 0), 1.0);
  EXPECT_EQ(n.norm_stats_id, s.Id());
}

TEST(NormTest, ConstantFrameIsFloored) {
  std::vector<FeatureMatrix> corpus = {FromRows({{4.0, 1.0}})};
  NormStats s = FitNormStats(corpus);
  EXPECT_EQ(s.stddev(0), kStdFloor);
  FeatureMatrix n = ApplyNorm(corpus[0], s);
  EXPECT_TRUE((n.values.array() == 0.0).all());
}

TEST(NormTest, StandardizedCorpusIsAFixedPoint) {
  auto x = WhiteNoise(64000, 0.1, 7);
  std::vector<FeatureMatrix> corpus = {
      ExtractFeatures({x, 16000}, FeatureKind::kMbk40, "x")};
  NormStats s = FitNormStats(corpus);
  std::vector<FeatureMatrix> normed = {ApplyNorm(corpus[0], s)};
  normed[0].norm_stats_id.clear();
  NormStats t = FitNormStats(normed);
  EXPECT_LT((t.mean.array()).abs().maxCoeff(), 1e-9);
  EXPECT_LT((t.stddev.array() - 1.0).abs().maxCoeff(), 1e-9);
  FeatureMatrix again = ApplyNorm(normed[0], t);
  EXPECT_LT((again.values - normed[0].values).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(NormTest, RoundTrip) {
  auto x = WhiteNoise(16000, 0.2, 8);
  std::vector<FeatureMatrix> corpus = {
      ExtractFeatures({x, 16000}, FeatureKind::kMfcc24, "x")};
  NormStats s = FitNormStats(corpus);
  FeatureMatrix back = InvertNorm(ApplyNorm(corpus[0], s), s);
  EXPECT_LT((back.values - corpus[0].values).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_TRUE(back.norm_stats_id.empty());
  std::vector<FeatureMatrix> none;
  EXPECT_THROW(FitNormStats(none), DataError);
}

TEST(ContextTest, ReferenceInputDimension) {
  ContextOptions o;  // tau 45, T 6
  EXPECT_EQ(ContextDim(40, o), (91 + 1) * 40);
  EXPECT_EQ(ContextDim(40, o), 3680);
  EXPECT_EQ(ContextDim(50, o), 4600);
}

TEST(ContextTest, SingleFrameWindow) {
  FeatureMatrix m = FromRows({{1, 2}, {3, 4}, {5, 6}});
  ContextOptions o;
  o.tau = 0;
  o.noise_frames = 1;
  Matrix in = MakeContextInputs(m, o);
  ASSERT_EQ(in.rows(), 4);
  ASSERT_EQ(in.cols(), 3);
  EXPECT_EQ(in.col(1), (Vector(4) << 3, 4, 1, 2).finished());
}

// Window of frame n, replicated at the edges, then the mean of the first T
// frames: written directly from the definition.
Vector OracleWindow(const Matrix &y, int n, int tau, int T, int dilation) {
  std::vector<Real> out;
  for (int j = -(tau / dilation); j <= tau / dilation; j++) {
    int idx = std::clamp(n + j * dilation, 0, static_cast<int>(y.rows()) - 1);
    for (Eigen::Index d = 0; d < y.cols(); d++) out.push_back(y(idx, d));
  }
  for (Eigen::Index d = 0; d < y.cols(); d++) {
    double s = 0.0;
    for (int t = 0; t < T; t++) s += y(t, d);
    out.push_back(s / T);
  }
  return Eigen::Map<Vector>(out.data(), static_cast<Eigen::Index>(out.size()));
}

TEST(ContextTest, MatchesReplicationOracle) {
  Rng rng(10);
  std::normal_distribution<double> g;
  FeatureMatrix m;
  m.values.resize(10, 3);
  for (Eigen::Index i = 0; i < m.values.size(); i++) m.values.data()[i] = g(rng);
  for (int dilation : {1, 2}) {
    ContextOptions o;
    o.tau = 2;
    o.noise_frames = 4;
    o.dilation = dilation;
    Matrix in = MakeContextInputs(m, o);
    ASSERT_EQ(in.cols(), 10);
    for (int n = 0; n < 10; n++)
      ASSERT_LT((in.col(n) - OracleWindow(m.values, n, 2, 4, dilation))
                    .cwiseAbs()
                    .maxCoeff(),
                1e-12)
          << n;
  }
}

TEST(ContextTest, NoiseBlockIsConstantWithinAChunk) {
  auto x = WhiteNoise(16000, 0.1, 11);
  FeatureMatrix m = ExtractFeatures({x, 16000}, FeatureKind::kMbk40, "x");
  ContextOptions o;
  o.tau = 5;
  o.stride = 3;
  Matrix in = MakeContextInputs(m, o);
  EXPECT_EQ(in.cols(), static_cast<Eigen::Index>(WindowCenters(m.NumFrames(), 3).size()));
  auto z = in.bottomRows(40);
  for (Eigen::Index c = 1; c < z.cols(); c++) ASSERT_EQ(z.col(c), z.col(0));
  EXPECT_EQ(WindowCenters(7, 3), (std::vector<Eigen::Index>{0, 3, 6}));
  ContextOptions bad;
  bad.stride = 0;
  EXPECT_THROW(bad.Validate(), ConfigError);
}

TEST(FeatureCacheTest, RoundTripAndBadMagic) {
  testing::ScratchDir dir("feat");
  auto x = WhiteNoise(8000, 0.1, 12);
  std::vector<FeatureMatrix> ms = {
      ExtractFeatures({x, 16000}, FeatureKind::kMbk40, "one"),
      ExtractFeatures({x, 16000}, FeatureKind::kMbk40, "two")};
  WriteFeatureCache(dir / "c.feats", ms);
  auto back = ReadFeatureCache(dir / "c.feats");
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].chunk_id, "two");
  EXPECT_EQ(back[0].kind, FeatureKind::kMbk40);
  for (Eigen::Index i = 0; i < ms[0].values.size(); i++)
    ASSERT_EQ(back[0].values.data()[i],
              static_cast<double>(static_cast<float>(ms[0].values.data()[i])));
  std::ofstream(dir / "bad.feats", std::ios::binary) << "GARBAGE!12345678";
  EXPECT_THROW(ReadFeatureCache(dir / "bad.feats"), DataError);
}

}  // namespace
}  // namespace audiotag
