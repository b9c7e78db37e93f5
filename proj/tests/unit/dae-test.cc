// unit/dae-test.cc

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

#include <random>

#include <gtest/gtest.h>

#include "audiotag/dae/dae.h"
#include "oracles.h"
#include "synthetic-corpus.h"

namespace audiotag {
namespace {

Matrix RandomMatrix(Eigen::Index r, Eigen::Index c, uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < m.size(); i++) m.data()[i] = g(rng);
  return m;
}

DaeConfig TinyConfig(DaeVariant v) {
  DaeConfig c = v == DaeVariant::kAsymmetric ? DaeConfig::Asymmetric()
                                             : DaeConfig::Symmetric();
  c.input_frames = 3;
  c.encoder_hidden = 12;
  c.decoder_hidden = 12;
  c.bottleneck = v == DaeVariant::kAsymmetric ? 3 : 6;
  c.training = {0.001, 0.9, 20, 3, 0};
  c.seed = 5;
  return c;
}

void MakeLinear(DaeModel *m) {
  for (auto &l : m->encoder.layers()) l.activation = Activation::kLinear;
  for (auto &l : m->decoder.layers()) l.activation = Activation::kLinear;
}

TEST(DaeConfigTest, PresetsAndDims) {
  DaeConfig a = DaeConfig::Asymmetric(), s = DaeConfig::Symmetric();
  EXPECT_EQ(a.bottleneck, 50);
  EXPECT_EQ(s.bottleneck, 200);
  EXPECT_EQ(a.InputDim(40), 280);
  EXPECT_EQ(a.OutputDim(40), 40);
  EXPECT_EQ(s.OutputDim(40), 280);
  a.input_frames = 6;
  EXPECT_THROW(a.Validate(), ConfigError);
  EXPECT_EQ(DaeConfigToJson(DaeConfigFromJson(DaeConfigToJson(s))),
            DaeConfigToJson(s));
}

TEST(DaeTest, LinearDaeMatchesPcaResidual) {
  Matrix x = testing::LowRankData(40, 3, 2000, 0.05, 2);
  Real oracle = testing::PcaResidual(x, 3);
  DaeConfig c = DaeConfig::Symmetric();
  c.encoder_hidden = c.decoder_hidden = 10;
  c.bottleneck = 3;
  c.bottleneck_activation = Activation::kLinear;
  c.corruption = 0.0;
  c.training = {0.001, 0.9, 20, 40, 0};
  DaeModel m = InitDae(c, 40, 40);
  MakeLinear(&m);
  MatrixBatchSource src(x, x);
  TrainDaeNetworks(&m, src, nullptr);
  Real err = ReconstructionError(m, src);
  EXPECT_LE(err, 1.1 * oracle) << "pca residual " << oracle;
  // The best rank-3 map cannot be beaten.
  EXPECT_GE(err, oracle * (1.0 - 1e-9));
}

TEST(DaeTest, NearIdentityWithoutBottleneck) {
  Matrix x = RandomMatrix(4, 200, 3);
  DaeConfig c = DaeConfig::Symmetric();
  c.encoder_hidden = c.decoder_hidden = 8;
  c.bottleneck = 8;
  c.bottleneck_activation = Activation::kLinear;
  c.corruption = 0.0;
  c.training = {0.01, 0.9, 10, 150, 0};
  DaeModel m = InitDae(c, 4, 4);
  MakeLinear(&m);
  MatrixBatchSource src(x, x);
  Real before = ReconstructionError(m, src);
  TrainDaeNetworks(&m, src, nullptr);
  EXPECT_LT(ReconstructionError(m, src), 1e-3 * before);
}

TEST(DaeTest, ZeroInputZeroBiasGivesZeroCode) {
  DaeModel m = InitDae(TinyConfig(DaeVariant::kAsymmetric), 15, 5);
  for (auto &l : m.encoder.layers()) l.bias.setZero();
  Matrix code = Encode(m, Matrix::Zero(15, 2));
  EXPECT_EQ(code.cwiseAbs().maxCoeff(), 0.0);
}

TEST(DaeTest, ReluCodesAreNonNegative) {
  DaeModel m = InitDae(TinyConfig(DaeVariant::kSymmetric), 15, 15);
  for (auto &l : m.encoder.layers()) l.bias = RandomMatrix(l.OutputDim(), 1, 7);
  Matrix code = Encode(m, 5.0 * RandomMatrix(15, 500, 8));
  EXPECT_GE(code.minCoeff(), 0.0);
  EXPECT_GT(code.maxCoeff(), 0.0);
}

TEST(DaeTest, EncodeMatchesDirectAffineRelu) {
  DaeModel m = InitDae(TinyConfig(DaeVariant::kAsymmetric), 15, 5);
  for (auto &l : m.encoder.layers()) l.bias = RandomMatrix(l.OutputDim(), 1, 9);
  Matrix x = RandomMatrix(15, 6, 10);
  const DenseLayer &l0 = m.encoder.layer(0), &l1 = m.encoder.layer(1);
  // Input corruption scales the first layer by (1 - rate) at inference.
  Real keep = 1.0 - l0.dropout_rate;
  Matrix h(l0.OutputDim(), 6), code(l1.OutputDim(), 6);
  for (int n = 0; n < 6; n++) {
    for (Eigen::Index i = 0; i < h.rows(); i++) {
      Real a = l0.bias(i);
      for (Eigen::Index j = 0; j < 15; j++) a += keep * l0.weights(i, j) * x(j, n);
      h(i, n) = std::max(a, 0.0);
    }
    for (Eigen::Index i = 0; i < code.rows(); i++) {
      Real a = l1.bias(i);
      for (Eigen::Index j = 0; j < h.rows(); j++) a += l1.weights(i, j) * h(j, n);
      code(i, n) = std::max(a, 0.0);
    }
  }
  EXPECT_LT((Encode(m, x) - code).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_THROW(Encode(m, Matrix::Zero(14, 1)), ShapeError);
}

TEST(DaeTest, ZeroModelErrorIsMeanSquaredTargetNorm) {
  DaeModel m = InitDae(TinyConfig(DaeVariant::kAsymmetric), 15, 5);
  for (auto &l : m.decoder.layers()) {
    l.weights.setZero();
    l.bias.setZero();
  }
  Matrix x = RandomMatrix(15, 30, 11), t = RandomMatrix(5, 30, 12);
  MatrixBatchSource src(x, t);
  Real expected = t.colwise().squaredNorm().mean();
  EXPECT_NEAR(ReconstructionError(m, src), expected, 1e-12);
}

TEST(DaeTest, EncoderAndDecoderAreUntied) {
  DaeModel m = InitDae(TinyConfig(DaeVariant::kSymmetric), 15, 15);
  Matrix dec0 = m.decoder.layer(0).weights;
  m.encoder.layer(0).weights.setConstant(3.0);
  EXPECT_EQ(m.decoder.layer(0).weights, dec0);
  MlpModel joined = JoinDae(m);
  joined.layer(0).weights.setZero();
  EXPECT_EQ(m.encoder.layer(0).weights(0, 0), 3.0);
  DaeModel back = m;
  SplitDae(joined, &back);
  EXPECT_EQ(back.encoder.layer(0).weights(0, 0), 0.0);
  EXPECT_EQ(back.decoder.layer(0).weights, dec0);
  EXPECT_EQ(joined.NumLayers(), 4u);
  EXPECT_EQ(joined.layer(3).activation, Activation::kLinear);
}

std::vector<FeatureMatrix> SineCorpus(int n, Eigen::Index frames, uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> g(0.0, 0.2);
  std::uniform_real_distribution<double> ph(0.0, 6.28);
  std::vector<FeatureMatrix> out;
  for (int c = 0; c < n; c++) {
    FeatureMatrix m;
    m.values.resize(frames, 5);
    double p = ph(rng);
    for (Eigen::Index t = 0; t < frames; t++)
      for (Eigen::Index d = 0; d < 5; d++)
        m.values(t, d) = std::sin(0.3 * t + p + d) + g(rng);
    m.chunk_id = "s" + std::to_string(c);
    out.push_back(std::move(m));
  }
  return out;
}

TEST(DaeTest, TrainRecordsCvCurveAndEncodesDeterministically) {
  auto chunks = SineCorpus(6, 40, 13);
  DaeConfig c = TinyConfig(DaeVariant::kAsymmetric);
  c.training.max_epochs = 4;
  DaeModel m = TrainDae(chunks, c, FitNormStats(chunks));
  ASSERT_EQ(m.history.epochs.size(), 4u);
  for (const auto &e : m.history.epochs) {
    EXPECT_TRUE(std::isfinite(e.valid_loss));
    EXPECT_GE(e.valid_loss, 0.0);
  }
  FeatureMatrix a = EncodeChunk(m, chunks[0]);
  FeatureMatrix b = EncodeChunk(m, chunks[0]);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.NumFrames(), 40);
  EXPECT_EQ(a.Dim(), 3);
  EXPECT_EQ(a.kind, FeatureKind::kDaeCode);
  EXPECT_EQ(a.chunk_id, "s0");

  DaeModel again = TrainDae(chunks, c, FitNormStats(chunks));
  EXPECT_EQ(again.encoder.layer(0).weights, m.encoder.layer(0).weights);

  testing::ScratchDir dir("dae");
  m.Save(dir / "d.model");
  DaeModel loaded = DaeModel::Load(dir / "d.model");
  EXPECT_EQ(EncodeChunk(loaded, chunks[1]).values, EncodeChunk(m, chunks[1]).values);
  EXPECT_EQ(DaeConfigToJson(loaded.config), DaeConfigToJson(m.config));
}

TEST(DaeTest, ConstantChunkGivesConstantCodes) {
  FeatureMatrix flat;
  flat.values = Matrix::Constant(30, 5, 0.7);
  auto chunks = SineCorpus(3, 30, 14);
  DaeModel m = InitDae(TinyConfig(DaeVariant::kAsymmetric), 15, 5);
  m.norm = FitNormStats(chunks);
  FeatureMatrix codes = EncodeChunk(m, flat);
  for (Eigen::Index t = 1; t < codes.NumFrames(); t++)
    EXPECT_LT((codes.values.row(t) - codes.values.row(0)).cwiseAbs().maxCoeff(),
              1e-12);
}

TEST(DaeTest, FullScaleShapes) {
  // 7 x 40 MBK frames in, 50 codes out per frame of a 399-frame chunk.
  DaeModel m = InitDae(DaeConfig::Asymmetric(), 280, 40);
  FeatureMatrix f;
  f.values = RandomMatrix(399, 40, 15);
  FeatureMatrix codes = EncodeChunk(m, f);
  EXPECT_EQ(codes.NumFrames(), 399);
  EXPECT_EQ(codes.Dim(), 50);
  ContextOptions o;  // tau 45, 6 noise frames
  EXPECT_EQ(ContextDim(codes.Dim(), o), 91 * 50 + 50);
  FeatureMatrix wrong;
  wrong.values = Matrix::Zero(10, 24);
  EXPECT_THROW(EncodeChunk(m, wrong), ShapeError);
}

TEST(DaeWindowDatasetTest, TargetsFollowVariant) {
  auto chunks = SineCorpus(2, 10, 16);
  auto windows = DaeWindowDataset::AllWindows(chunks);
  EXPECT_EQ(windows.size(), 20u);
  DaeConfig a = TinyConfig(DaeVariant::kAsymmetric);
  DaeConfig s = TinyConfig(DaeVariant::kSymmetric);
  DaeWindowDataset da(chunks, a, windows), ds(chunks, s, windows);
  EXPECT_EQ(da.InputDim(), 15);
  EXPECT_EQ(da.TargetDim(), 5);
  EXPECT_EQ(ds.TargetDim(), 15);
  std::vector<size_t> idx = {4};
  Matrix xa, ta, xs, ts;
  da.Fill(idx, &xa, &ta);
  ds.Fill(idx, &xs, &ts);
  EXPECT_EQ(xa, xs);
  EXPECT_EQ(xs, ts);
  // The asymmetric target is the centre frame.
  for (int d = 0; d < 5; d++) EXPECT_EQ(ta(d, 0), chunks[0].values(4, d));
}

}  // namespace
}  // namespace audiotag
