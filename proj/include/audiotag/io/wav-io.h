// io/wav-io.h

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

#ifndef AUDIOTAG_IO_WAV_IO_H_
#define AUDIOTAG_IO_WAV_IO_H_

#include <span>
#include <string>
#include <vector>

#include "audiotag/base/audiotag-common.h"

namespace audiotag {

inline constexpr int kSampleRate = 16000;
inline constexpr size_t kChunkSamples = 64000;  // 4 s at 16 kHz

struct AudioChunk {
  std::vector<Real> samples;  // in [-1, 1)
  int sample_rate = kSampleRate;

  double Duration() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

// Reads a RIFF/WAVE file holding 16-bit PCM, mono, 16 kHz.  Samples are
// scaled by 1/32768.  Any other rate, channel count or encoding raises
// DataError; nothing is resampled or downmixed.
AudioChunk ReadWav(const std::string &path);

// Writes 16-bit mono PCM.  Samples are clipped to [-1, 1] and rounded to the
// nearest integer step.
void WriteWav(const std::string &path, std::span<const Real> samples,
              int sample_rate = kSampleRate);

// Zero-pads or truncates to exactly `length` samples.
void FitChunkLength(AudioChunk *chunk, size_t length = kChunkSamples);

// ReadWav followed by FitChunkLength; warns when the file was off by more
// than one 10 ms hop.
AudioChunk ReadChunkAudio(const std::string &path);

}  // namespace audiotag

#endif  // AUDIOTAG_IO_WAV_IO_H_
