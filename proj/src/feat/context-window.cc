// feat/context-window.cc

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

#include "audiotag/feat/context-window.h"

#include <algorithm>

namespace audiotag {

void ContextOptions::Validate() const {
  if (tau < 0) throw ConfigError("context half-width tau must be >= 0");
  if (noise_frames < 1)
    throw ConfigError("noise estimate needs at least one frame (T >= 1)");
  if (stride < 1) throw ConfigError("context stride must be >= 1");
  if (dilation < 1) throw ConfigError("context dilation must be >= 1");
}

Eigen::Index ContextDim(Eigen::Index feat_dim, const ContextOptions &opts) {
  return (opts.NumContextFrames() + (opts.append_noise ? 1 : 0)) * feat_dim;
}

RowVector NoiseEstimate(const Matrix &values, int noise_frames) {
  if (noise_frames < 1)
    throw ConfigError("noise estimate needs at least one frame (T >= 1)");
  if (values.rows() < noise_frames)
    throw DataError("chunk has " + std::to_string(values.rows()) +
                    " frames, noise estimate needs " +
                    std::to_string(noise_frames));
  return values.topRows(noise_frames).colwise().mean();
}

std::vector<Eigen::Index> WindowCenters(Eigen::Index num_frames, int stride) {
  std::vector<Eigen::Index> centers;
  for (Eigen::Index t = 0; t < num_frames; t += stride) centers.push_back(t);
  return centers;
}

void FillContextWindow(const Matrix &values, const RowVector &noise,
                       Eigen::Index center, const ContextOptions &opts,
                       Eigen::Ref<Vector> out) {
  const Eigen::Index dim = values.cols();
  const Eigen::Index last = values.rows() - 1;
  const int half = opts.tau / opts.dilation;
  Eigen::Index pos = 0;
  for (int j = -half; j <= half; j++) {
    Eigen::Index t = std::clamp<Eigen::Index>(center + j * opts.dilation, 0,
                                              last);
    out.segment(pos, dim) = values.row(t).transpose();
    pos += dim;
  }
  if (opts.append_noise) out.segment(pos, dim) = noise.transpose();
}

Matrix MakeContextInputs(const FeatureMatrix &m, const ContextOptions &opts) {
  opts.Validate();
  RowVector noise = opts.append_noise ? NoiseEstimate(m.values,
                                                      opts.noise_frames)
                                      : RowVector();
  if (m.NumFrames() == 0) throw DataError(m.chunk_id + ": no frames");
  auto centers = WindowCenters(m.NumFrames(), opts.stride);
  Matrix out(ContextDim(m.Dim(), opts), static_cast<Eigen::Index>(
                                            centers.size()));
  for (size_t i = 0; i < centers.size(); i++)
    FillContextWindow(m.values, noise, centers[i], opts,
                      out.col(static_cast<Eigen::Index>(i)));
  return out;
}

}  // namespace audiotag
