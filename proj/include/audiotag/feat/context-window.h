// feat/context-window.h

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

#ifndef AUDIOTAG_FEAT_CONTEXT_WINDOW_H_
#define AUDIOTAG_FEAT_CONTEXT_WINDOW_H_

#include <vector>

#include "audiotag/feat/feature-matrix.h"

namespace audiotag {

// Background-noise-aware context expansion.  The input for frame n is
//
//   [ Y(n - tau), ..., Y(n), ..., Y(n + tau), Z ]
//
// where Z is the mean of the chunk's first `noise_frames` frames, so it is
// the same for every window of a chunk.  Frames outside the chunk replicate
// the first or last frame.  With dilation d > 1 only every d-th frame of the
// span is stacked (offsets j * d, |j| <= tau / d), which keeps wide contexts
// affordable for high-dimensional inputs such as 200-dim DAE codes.
struct ContextOptions {
  int tau = 45;
  int noise_frames = 6;
  // Distance between consecutive window centres.
  int stride = 1;
  int dilation = 1;
  // Append the noise block at all.  DAE input windows switch it off.
  bool append_noise = true;

  // Throws ConfigError on tau < 0, noise_frames < 1, stride < 1 or
  // dilation < 1.
  void Validate() const;
  int NumContextFrames() const { return 2 * (tau / dilation) + 1; }
};

Eigen::Index ContextDim(Eigen::Index feat_dim, const ContextOptions &opts);

// Mean of the first `noise_frames` rows.  DataError when there are fewer.
RowVector NoiseEstimate(const Matrix &values, int noise_frames);

// 0, stride, 2 * stride, ... < num_frames.
std::vector<Eigen::Index> WindowCenters(Eigen::Index num_frames, int stride);

// Writes the window centred on `center` into `out` (ContextDim entries).
// `noise` is ignored when opts.append_noise is false.
void FillContextWindow(const Matrix &values, const RowVector &noise,
                       Eigen::Index center, const ContextOptions &opts,
                       Eigen::Ref<Vector> out);

// All windows of one chunk, one per column, centred on WindowCenters().
Matrix MakeContextInputs(const FeatureMatrix &m, const ContextOptions &opts);

}  // namespace audiotag

#endif  // AUDIOTAG_FEAT_CONTEXT_WINDOW_H_
