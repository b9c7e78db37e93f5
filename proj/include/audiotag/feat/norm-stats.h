// feat/norm-stats.h

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

#ifndef AUDIOTAG_FEAT_NORM_STATS_H_
#define AUDIOTAG_FEAT_NORM_STATS_H_

#include <span>
#include <string>

#include "audiotag/feat/feature-matrix.h"

namespace audiotag {

inline constexpr Real kStdFloor = 1e-8;

// Per-dimension mean and (population) standard deviation of a training
// corpus.  Immutable once fitted.
struct NormStats {
  Vector mean;
  Vector stddev;

  Eigen::Index Dim() const { return mean.size(); }
  // Stable content hash, used to tie models and caches to their stats.
  std::string Id() const;
};

// Pools every frame of every matrix.  Dimensions whose deviation falls
// below kStdFloor are floored with a warning.  Throws DataError on an empty
// corpus or mixed dimensionality.
NormStats FitNormStats(std::span<const FeatureMatrix> corpus);

// (x - mean) / stddev per column.
FeatureMatrix ApplyNorm(const FeatureMatrix &m, const NormStats &stats);
// x * stddev + mean per column.
FeatureMatrix InvertNorm(const FeatureMatrix &m, const NormStats &stats);

}  // namespace audiotag

#endif  // AUDIOTAG_FEAT_NORM_STATS_H_
