// feat/mel-features.h

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

#ifndef AUDIOTAG_FEAT_MEL_FEATURES_H_
#define AUDIOTAG_FEAT_MEL_FEATURES_H_

#include <string>

#include "audiotag/feat/feature-matrix.h"
#include "audiotag/feat/framing.h"
#include "audiotag/io/wav-io.h"

namespace audiotag {

struct MelOptions {
  int num_bins = 40;
  int fft_size = 512;
  double sample_rate = kSampleRate;
  double low_freq = 0.0;
  double high_freq = 8000.0;
  double log_floor = 1e-10;
  int num_ceps = 24;  // c0..c23, no liftering
};

// HTK mel scale, 2595 log10(1 + f / 700).
double HzToMel(double hz);
double MelToHz(double mel);

// Triangular, unit-peak filters equally spaced on the mel scale between
// low_freq and high_freq, evaluated at the FFT bin frequencies.
class MelFilterbank {
 public:
  explicit MelFilterbank(const MelOptions &opts = {});

  // num_bins x (fft_size / 2 + 1).
  const Matrix &weights() const { return weights_; }
  // Centre frequency of each filter, Hz.
  const Vector &center_hz() const { return center_hz_; }
  const MelOptions &options() const { return opts_; }

  // Rows of `power` are power spectra; returns one row of filter energies
  // per frame.
  Matrix Apply(const Matrix &power) const;

 private:
  MelOptions opts_;
  Matrix weights_;
  Vector center_hz_;
};

// |FFT|^2 of each (zero-padded) row, keeping bins 0..fft_size/2.
Matrix PowerSpectrum(const Matrix &frames, int fft_size);

// Orthonormal DCT-II basis, num_ceps x num_bins.
Matrix DctMatrix(int num_ceps, int num_bins);

// 40 log mel energies per frame, floored at log(log_floor).
FeatureMatrix ComputeMbk(const Matrix &frames, const MelOptions &opts = {});

// First num_ceps DCT-II coefficients of the log mel energies.
FeatureMatrix ComputeMfcc(const Matrix &frames, const MelOptions &opts = {});

// Frames the chunk and runs ComputeMbk or ComputeMfcc.  DAE codes cannot be
// extracted from audio; asking for them is a ConfigError.
FeatureMatrix ExtractFeatures(const AudioChunk &chunk, FeatureKind kind,
                              const std::string &chunk_id,
                              const FrameOptions &frame_opts = {},
                              const MelOptions &mel_opts = {});

}  // namespace audiotag

#endif  // AUDIOTAG_FEAT_MEL_FEATURES_H_
