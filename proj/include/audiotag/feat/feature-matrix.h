// feat/feature-matrix.h

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

#ifndef AUDIOTAG_FEAT_FEATURE_MATRIX_H_
#define AUDIOTAG_FEAT_FEATURE_MATRIX_H_

#include <string>

#include "audiotag/base/audiotag-common.h"

namespace audiotag {

enum class FeatureKind { kMbk40, kMfcc24, kDaeCode };

// "mbk", "mfcc", "daecode".
std::string FeatureKindName(FeatureKind kind);
FeatureKind ParseFeatureKind(const std::string &name);

// One chunk's features: rows are 10 ms frames, columns are dimensions.
struct FeatureMatrix {
  Matrix values;
  FeatureKind kind = FeatureKind::kMbk40;
  double frame_period = 0.01;
  std::string chunk_id;
  // Id of the NormStats applied to `values`, empty when unnormalized.
  std::string norm_stats_id;

  Eigen::Index NumFrames() const { return values.rows(); }
  Eigen::Index Dim() const { return values.cols(); }
};

}  // namespace audiotag

#endif  // AUDIOTAG_FEAT_FEATURE_MATRIX_H_
