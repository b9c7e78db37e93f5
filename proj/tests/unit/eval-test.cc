// unit/eval-test.cc

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
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "audiotag/eval/metrics.h"
#include "audiotag/eval/report.h"
#include "oracles.h"
#include "synthetic-corpus.h"

namespace audiotag {
namespace {

void OverlappingGaussians(int n, uint64_t seed, std::vector<Real> *scores,
                          std::vector<bool> *truth) {
  Rng rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::bernoulli_distribution pos(0.4);
  scores->clear();
  truth->clear();
  for (int i = 0; i < n; i++) {
    bool t = pos(rng);
    truth->push_back(t);
    scores->push_back(g(rng) + (t ? 1.0 : 0.0));
  }
}

TEST(EerTest, SeparableIsZeroConstantIsHalf) {
  std::vector<Real> s = {0.1, 0.2, 0.3, 0.7, 0.8};
  std::vector<bool> t = {false, false, false, true, true};
  EXPECT_EQ(ComputeEer(s, t), 0.0);
  std::vector<Real> c(5, 0.5);
  EXPECT_EQ(ComputeEer(c, t), 0.5);
  // Perfectly wrong.
  std::vector<bool> flipped = {true, true, true, false, false};
  EXPECT_EQ(ComputeEer(s, flipped), 1.0);
  std::vector<bool> one_class(5, true);
  EXPECT_THROW(ComputeEer(s, one_class), DataError);
}

TEST(EerTest, HandInterpolation) {
  // Vertices (fpr, fnr): (0,1) (0,.5) (.5,.5) (.5,0) (1,0); FNR - FPR hits 0
  // on the (0,.5)-(.5,.5) step at fpr 0.5.
  std::vector<Real> s = {0.9, 0.6, 0.5, 0.1};
  std::vector<bool> t = {true, false, true, false};
  EXPECT_NEAR(ComputeEer(s, t), 0.5, 1e-15);
  auto pts = OperatingPoints(s, t);
  ASSERT_EQ(pts.size(), 5u);
  EXPECT_EQ(pts[0].fpr, 0.0);
  EXPECT_EQ(pts[0].fnr, 1.0);
  EXPECT_EQ(pts[4].fpr, 1.0);
  EXPECT_EQ(pts[4].fnr, 0.0);
}

TEST(EerTest, TiedScoresFormOneStep) {
  std::vector<Real> s = {0.5, 0.5, 0.5, 0.5, 0.9};
  std::vector<bool> t = {true, false, true, false, true};
  EXPECT_EQ(OperatingPoints(s, t).size(), 3u);
}

TEST(EerTest, MatchesBruteForceSweep) {
  for (uint64_t seed = 0; seed < 10; seed++) {
    std::vector<Real> s;
    std::vector<bool> t;
    OverlappingGaussians(2000, seed, &s, &t);
    EXPECT_NEAR(ComputeEer(s, t), testing::BruteForceEer(s, t, 100000), 1e-3)
        << "seed " << seed;
  }
}

TEST(EerTest, RankStatisticAndSymmetry) {
  std::vector<Real> s, t_s, neg;
  std::vector<bool> t, nt;
  OverlappingGaussians(300, 42, &s, &t);
  for (Real x : s) {
    t_s.push_back(std::exp(3.0 * x) + 7.0);
    neg.push_back(-x);
  }
  for (bool b : t) nt.push_back(!b);
  Real e = ComputeEer(s, t);
  EXPECT_GE(e, 0.0);
  EXPECT_LE(e, 1.0);
  EXPECT_NEAR(ComputeEer(t_s, t), e, 1e-12);
  EXPECT_NEAR(ComputeEer(neg, nt), e, 1e-12);
}

TEST(PrfTest, HandCounts) {
  PrfResult r = PrfFromCounts(2, 1, 2);
  EXPECT_NEAR(r.precision, 2.0 / 3.0, 1e-9);
  EXPECT_NEAR(r.recall, 0.5, 1e-9);
  EXPECT_NEAR(r.f_score, 4.0 / 7.0, 1e-9);
  EXPECT_FALSE(r.precision_undefined || r.recall_undefined || r.f_undefined);
}

TEST(PrfTest, PerfectAndEmptyPredictions) {
  std::vector<Real> s = {0.9, 0.1, 0.8, 0.4};
  std::vector<bool> t = {true, false, true, false};
  PrfResult p = ComputePrf(s, t);
  EXPECT_EQ(p.precision, 1.0);
  EXPECT_EQ(p.recall, 1.0);
  EXPECT_EQ(p.f_score, 1.0);
  EXPECT_EQ(p.tn, 2);
  // 0.4 is not above the threshold.
  std::vector<Real> low = {0.4, 0.1, 0.3, 0.4};
  PrfResult e = ComputePrf(low, t);
  EXPECT_EQ(e.tp + e.fp, 0);
  EXPECT_TRUE(e.precision_undefined);
  EXPECT_EQ(e.precision, 0.0);
  EXPECT_EQ(e.recall, 0.0);
  EXPECT_EQ(e.f_score, 0.0);
  PrfResult none = PrfFromCounts(0, 0, 0);
  EXPECT_TRUE(none.recall_undefined);
  EXPECT_TRUE(none.f_undefined);
}

ScoredSet RandomScoredSet(int chunks, uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ScoredSet s;
  for (int c = 0; c < chunks; c++) {
    TagSet truth;
    Vector v(kNumTags);
    for (int k = 0; k < kNumTags; k++) {
      truth.Set(k, (c + k) % 3 == 0);
      v(k) = 0.5 * u(rng) + (truth.Has(k) ? 0.3 : 0.0);
    }
    s.AddChunk("c" + std::to_string(c), v, truth);
  }
  return s;
}

EvalReport EerOnly(const std::array<Real, kNumTags> &eer, const std::string &name) {
  EvalReport r;
  r.name = name;
  for (int k = 0; k < kNumTags; k++) r.tags[k].eer = eer[k];
  return r;
}

TEST(AggregateTest, IdenticalFoldsAreIdempotent) {
  EvalReport one = Evaluate(RandomScoredSet(40, 1), "fold0");
  std::vector<std::optional<EvalReport>> folds(3, one);
  std::vector<std::string> labels = {"fold0", "fold1", "fold2"};
  EvalReport agg = AggregateFolds(folds, labels, "avg");
  for (int k = 0; k < kNumTags; k++)
    EXPECT_NEAR(*agg.tags[k].eer, *one.tags[k].eer, 1e-15);
  EXPECT_NEAR(*agg.average_eer, *one.average_eer, 1e-15);
  EXPECT_EQ(agg.tags[0].prf.tp, 3 * one.tags[0].prf.tp);
  EXPECT_NEAR(agg.tags[0].prf.precision, one.tags[0].prf.precision, 1e-15);
  EXPECT_TRUE(agg.complete);
  EXPECT_EQ(agg.fold_eer.size(), 3u);
}

TEST(AggregateTest, TwoFoldMean) {
  std::array<Real, kNumTags> a, b;
  a.fill(0.1);
  b.fill(0.2);
  std::vector<std::optional<EvalReport>> folds = {EerOnly(a, "f0"), EerOnly(b, "f1")};
  std::vector<std::string> labels = {"fold0", "fold1"};
  EvalReport agg = AggregateFolds(folds, labels, "avg");
  EXPECT_NEAR(*agg.tags[3].eer, 0.15, 1e-15);
  EXPECT_NEAR(*agg.average_eer, 0.15, 1e-15);
}

TEST(AggregateTest, GmmBaselineDevelopmentRow) {
  // Per-tag development EERs b c f m o p v of the GMM baseline.
  std::array<Real, kNumTags> row = {0.074, 0.225, 0.289, 0.269,
                                    0.290, 0.248, 0.050};
  std::vector<std::optional<EvalReport>> folds(5, EerOnly(row, "f"));
  std::vector<std::string> labels = {"fold0", "fold1", "fold2", "fold3", "fold4"};
  EvalReport agg = AggregateFolds(folds, labels, "gmm");
  EXPECT_NEAR(*agg.average_eer, 0.206, 5e-4);
}

TEST(AggregateTest, MissingFoldIsListedNotImputed) {
  std::array<Real, kNumTags> a;
  a.fill(0.3);
  std::vector<std::optional<EvalReport>> folds = {EerOnly(a, "f0"), std::nullopt};
  std::vector<std::string> labels = {"fold0", "fold1"};
  EvalReport agg = AggregateFolds(folds, labels, "avg");
  ASSERT_EQ(agg.missing_folds.size(), 1u);
  EXPECT_EQ(agg.missing_folds[0], "fold1");
  EXPECT_FALSE(agg.complete);
  EXPECT_NEAR(*agg.average_eer, 0.3, 1e-15);
  EXPECT_FALSE(agg.fold_eer[1][0].has_value());
}

TEST(AggregateTest, UndefinedTagIsExcluded) {
  ScoredSet s;
  for (int c = 0; c < 6; c++) {
    TagSet t;
    t.Set(0, c % 2 == 0);
    Vector v = Vector::Constant(kNumTags, 0.1 * c);
    s.AddChunk("c" + std::to_string(c), v, t);
  }
  EvalReport r = Evaluate(s, "x");
  EXPECT_TRUE(r.tags[0].eer.has_value());
  EXPECT_FALSE(r.tags[1].eer.has_value());
  EXPECT_NEAR(*r.average_eer, *r.tags[0].eer, 1e-15);
}

TEST(ReportTest, CsvRoundTripAndFIdentity) {
  testing::ScratchDir dir("eval");
  EvalReport r = Evaluate(RandomScoredSet(60, 2), "ignored");
  WriteReportCsv(r, dir / "mbk-dnn.csv");
  EvalReport back = ReadReportCsv(dir / "mbk-dnn.csv");
  EXPECT_EQ(back.name, "mbk-dnn");
  for (int k = 0; k < kNumTags; k++) {
    EXPECT_NEAR(*back.tags[k].eer, *r.tags[k].eer, 1e-12);
    EXPECT_EQ(back.tags[k].prf.tp, r.tags[k].prf.tp);
  }
  EXPECT_EQ(ReportCsv(back), ReportCsv(r));

  std::istringstream csv(ReportCsv(r));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line.rfind("tag,eer,precision,recall,f_score", 0), 0u);
  int rows = 0;
  while (std::getline(csv, line)) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f[2] == "NA" || f[3] == "NA" || f[4] == "NA") continue;
    Real p = std::stod(f[2]), rc = std::stod(f[3]), fs = std::stod(f[4]);
    Real expected = p + rc > 0 ? 2 * p * rc / (p + rc) : 0.0;
    EXPECT_NEAR(fs, expected, 1e-9) << line;
    rows++;
  }
  EXPECT_EQ(rows, kNumTags + 1);
}

TEST(ReportTest, MalformedCsvIsRejected) {
  testing::ScratchDir dir("eval");
  EvalReport r = Evaluate(RandomScoredSet(30, 3), "r");
  std::string csv = ReportCsv(r);
  // Swap the tag letter of one row.
  auto pos = csv.find("\nm,");
  ASSERT_NE(pos, std::string::npos);
  csv[pos + 1] = 'x';
  std::ofstream(dir / "bad.csv") << csv;
  EXPECT_THROW(ReadReportCsv(dir / "bad.csv"), DataError);
  std::ofstream(dir / "empty.csv") << "";
  EXPECT_THROW(ReadReportCsv(dir / "empty.csv"), DataError);
}

TEST(ReportTest, MarkdownLayout) {
  std::array<Real, kNumTags> a;
  a.fill(0.125);
  EvalReport r = EerOnly(a, "MBK-DNN");
  r.average_eer = 0.125;
  std::vector<EvalReport> rs = {r};
  std::string md = ReportMarkdown(rs);
  EXPECT_NE(md.find("| Tags | b | c | f | m | o | p | v | Average |"),
            std::string::npos);
  EXPECT_NE(md.find("| MBK-DNN |"), std::string::npos);
}

TEST(CompareTest, DeltasIdentityAndOrder) {
  std::array<Real, kNumTags> a, b, c;
  for (int k = 0; k < kNumTags; k++) {
    a[k] = 0.1 + 0.01 * k;
    b[k] = 0.2 - 0.02 * k;
    c[k] = 0.3;
  }
  auto ra = EerOnly(a, "alpha"), rb = EerOnly(b, "beta"), rc = EerOnly(c, "gamma");
  ra.average_eer = 0.13;
  rb.average_eer = 0.14;
  rc.average_eer = 0.3;
  std::vector<EvalReport> two = {ra, rb};
  std::string out = CompareReports(two, false);
  // The delta row holds beta - alpha per tag.
  auto pos = out.find("beta - alpha");
  ASSERT_NE(pos, std::string::npos);
  std::string row = out.substr(pos, out.find('\n', pos) - pos);
  std::stringstream ss(row);
  std::string cell;
  std::getline(ss, cell, ',');
  for (int k = 0; k < kNumTags; k++) {
    ASSERT_TRUE(std::getline(ss, cell, ','));
    EXPECT_NEAR(std::stod(cell), b[k] - a[k], 1e-9) << "tag " << k;
  }

  std::vector<EvalReport> self = {ra, ra};
  std::string same = CompareReports(self, false);
  pos = same.find("alpha - alpha");
  row = same.substr(pos, same.find('\n', pos) - pos);
  std::stringstream s2(row);
  std::getline(s2, cell, ',');
  while (std::getline(s2, cell, ',')) EXPECT_EQ(std::stod(cell), 0.0);

  std::vector<EvalReport> three = {rc, ra, rb};
  std::string ordered = CompareReports(three, true);
  EXPECT_LT(ordered.find("| gamma"), ordered.find("| alpha"));
  EXPECT_LT(ordered.find("| alpha"), ordered.find("| beta"));

  std::vector<EvalReport> single = {ra};
  EXPECT_THROW(CompareReports(single, false), ConfigError);
}

TEST(RocCsvTest, OneLinePerVertex) {
  ScoredSet s = RandomScoredSet(20, 4);
  std::vector<Real> sc;
  std::vector<bool> t;
  s.TagColumn(0, &sc, &t);
  std::string csv = RocCsv(s, 0);
  EXPECT_EQ(csv.rfind("threshold,fpr,fnr\n", 0), 0u);
  size_t lines = std::count(csv.begin(), csv.end(), '\n');
  EXPECT_EQ(lines, OperatingPoints(sc, t).size() + 1);
}

TEST(ScoredSetTest, Validation) {
  ScoredSet s;
  EXPECT_THROW(s.Add("a", 0, std::nan(""), true), DataError);
  EXPECT_THROW(s.Add("a", 7, 0.1, true), DataError);
  s.Add("a", 0, 0.1, true);
  EXPECT_THROW(s.Validate(), DataError);
}

}  // namespace
}  // namespace audiotag
