// testing/oracles.cc

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

#include "oracles.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>

namespace audiotag {
namespace testing {

Matrix LowRankData(Eigen::Index dim, Eigen::Index rank, Eigen::Index n,
                   Real noise, uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  auto draw = [&](Eigen::Index r, Eigen::Index c) {
    Matrix m(r, c);
    for (Eigen::Index i = 0; i < m.size(); i++) m.data()[i] = g(rng);
    return m;
  };
  Matrix a = draw(dim, rank) / std::sqrt(static_cast<Real>(rank));
  Matrix z = draw(rank, n);
  Matrix e = draw(dim, n);
  return a * z + noise * e;
}

Real PcaResidual(const Matrix &samples, Eigen::Index k) {
  Vector mean = samples.rowwise().mean();
  Matrix c = samples.colwise() - mean;
  Matrix cov = c * c.transpose() / static_cast<Real>(samples.cols());
  Eigen::SelfAdjointEigenSolver<Matrix> es(cov);
  // Eigenvalues come in increasing order.
  Vector ev = es.eigenvalues();
  return ev.head(ev.size() - k).sum();
}

Real BruteForceEer(std::span<const Real> scores, const std::vector<bool> &truth,
                   int num_thresholds) {
  Real lo = *std::min_element(scores.begin(), scores.end());
  Real hi = *std::max_element(scores.begin(), scores.end());
  std::vector<Real> pos, neg;
  for (size_t i = 0; i < scores.size(); i++)
    (truth[i] ? pos : neg).push_back(scores[i]);
  std::sort(pos.begin(), pos.end());
  std::sort(neg.begin(), neg.end());
  auto rates = [&](Real t, Real *fpr, Real *fnr) {
    *fnr = static_cast<Real>(std::lower_bound(pos.begin(), pos.end(), t) -
                             pos.begin()) / pos.size();
    *fpr = static_cast<Real>(neg.end() -
                             std::lower_bound(neg.begin(), neg.end(), t)) /
           neg.size();
  };
  // Thresholds from below the lowest score (everything positive) to above
  // the highest (nothing positive).
  Real step = (hi - lo) / num_thresholds;
  Real prev_fpr = 1.0, prev_fnr = 0.0;
  for (int i = 0; i <= num_thresholds + 1; i++) {
    Real t = i == num_thresholds + 1 ? std::nextafter(hi, hi + 1.0)
                                     : lo + step * i;
    Real fpr, fnr;
    rates(t, &fpr, &fnr);
    if (fnr >= fpr) {
      // Intersect the segment (prev_fpr, prev_fnr) -> (fpr, fnr) with the
      // diagonal.
      Real d0 = prev_fnr - prev_fpr, d1 = fnr - fpr;
      if (d1 == d0) return fnr;
      Real a = -d0 / (d1 - d0);
      return prev_fnr + a * (fnr - prev_fnr);
    }
    prev_fpr = fpr;
    prev_fnr = fnr;
  }
  return 0.5;
}

}  // namespace testing
}  // namespace audiotag
