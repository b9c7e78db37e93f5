// feat/framing.cc

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

#include "audiotag/feat/framing.h"

#include <cmath>
#include <numbers>

namespace audiotag {

Eigen::Index NumFrames(size_t num_samples, const FrameOptions &opts) {
  auto window = static_cast<size_t>(opts.window_samples);
  if (num_samples < window) return 0;
  return 1 + static_cast<Eigen::Index>((num_samples - window) /
                                       static_cast<size_t>(opts.hop_samples));
}

Vector HammingWindow(int length) {
  Vector w(length);
  if (length == 1) {
    w(0) = 1.0;
    return w;
  }
  for (int n = 0; n < length; n++)
    w(n) = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * n / (length - 1));
  return w;
}

Matrix FrameSignal(std::span<const Real> samples, const FrameOptions &opts) {
  if (opts.window_samples <= 0 || opts.hop_samples <= 0)
    throw ConfigError("frame window and hop must be positive");
  Eigen::Index num_frames = NumFrames(samples.size(), opts);
  if (num_frames == 0)
    throw DataError("signal of " + std::to_string(samples.size()) +
                    " samples is shorter than one " +
                    std::to_string(opts.window_samples) + "-sample window");
  const int win = opts.window_samples;
  RowVector taper = opts.hamming ? RowVector(HammingWindow(win).transpose())
                                 : RowVector::Ones(win);
  Matrix frames(num_frames, win);
  for (Eigen::Index t = 0; t < num_frames; t++) {
    Eigen::Map<const RowVector> seg(samples.data() + t * opts.hop_samples,
                                    win);
    frames.row(t) = seg.cwiseProduct(taper);
  }
  return frames;
}

}  // namespace audiotag
