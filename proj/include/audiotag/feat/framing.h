// feat/framing.h

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

#ifndef AUDIOTAG_FEAT_FRAMING_H_
#define AUDIOTAG_FEAT_FRAMING_H_

#include <span>

#include "audiotag/base/audiotag-common.h"

namespace audiotag {

struct FrameOptions {
  int window_samples = 320;  // 20 ms at 16 kHz
  int hop_samples = 160;     // 10 ms
  bool hamming = true;       // otherwise rectangular
};

// 1 + floor((num_samples - window) / hop), or 0 when shorter than a window.
Eigen::Index NumFrames(size_t num_samples, const FrameOptions &opts = {});

// Symmetric Hamming taper 0.54 - 0.46 cos(2 pi n / (N - 1)).
Vector HammingWindow(int length);

// Slices the signal into overlapping frames (one per row) and applies the
// taper.  Throws DataError when the signal is shorter than one window.
Matrix FrameSignal(std::span<const Real> samples,
                   const FrameOptions &opts = {});

}  // namespace audiotag

#endif  // AUDIOTAG_FEAT_FRAMING_H_
