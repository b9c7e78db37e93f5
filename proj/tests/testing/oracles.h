// testing/oracles.h

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

#ifndef AUDIOTAG_TESTING_ORACLES_H_
#define AUDIOTAG_TESTING_ORACLES_H_

#include <span>
#include <vector>

#include "audiotag/base/audiotag-common.h"

namespace audiotag {
namespace testing {

// dim x n samples (columns) drawn as A z + noise * e with A dim x rank,
// z and e standard normal.
Matrix LowRankData(Eigen::Index dim, Eigen::Index rank, Eigen::Index n,
                   Real noise, uint64_t seed);

// Mean squared norm per sample of what the best rank-k affine
// reconstruction leaves behind: the trailing eigenvalues of the centred
// covariance.
Real PcaResidual(const Matrix &samples, Eigen::Index k);

// EER from a sweep of `num_thresholds` evenly spaced thresholds over the
// score range (calling score >= t positive): the (FPR, FNR) pairs are
// tabulated for every threshold and the segment between the last pair with
// FNR < FPR and the next one is intersected with FNR = FPR.
Real BruteForceEer(std::span<const Real> scores, const std::vector<bool> &truth,
                   int num_thresholds);

}  // namespace testing
}  // namespace audiotag

#endif  // AUDIOTAG_TESTING_ORACLES_H_
