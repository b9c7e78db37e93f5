// feat/mel-features.cc

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

#include "audiotag/feat/mel-features.h"

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace audiotag {

std::string FeatureKindName(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::kMbk40: return "mbk";
    case FeatureKind::kMfcc24: return "mfcc";
    case FeatureKind::kDaeCode: return "daecode";
  }
  return "?";
}

FeatureKind ParseFeatureKind(const std::string &name) {
  if (name == "mbk") return FeatureKind::kMbk40;
  if (name == "mfcc") return FeatureKind::kMfcc24;
  if (name == "daecode") return FeatureKind::kDaeCode;
  throw ConfigError("unknown feature kind '" + name +
                    "' (expected mbk, mfcc or daecode)");
}

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double MelToHz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

MelFilterbank::MelFilterbank(const MelOptions &opts) : opts_(opts) {
  if (opts.num_bins < 1 || opts.fft_size < 2 ||
      opts.high_freq <= opts.low_freq ||
      opts.high_freq > opts.sample_rate / 2)
    throw ConfigError("invalid mel filterbank options");
  const int num_fft_bins = opts.fft_size / 2 + 1;
  const double mel_low = HzToMel(opts.low_freq);
  const double mel_high = HzToMel(opts.high_freq);
  const double mel_step = (mel_high - mel_low) / (opts.num_bins + 1);

  weights_ = Matrix::Zero(opts.num_bins, num_fft_bins);
  center_hz_.resize(opts.num_bins);
  for (int m = 0; m < opts.num_bins; m++) {
    double left = MelToHz(mel_low + m * mel_step);
    double center = MelToHz(mel_low + (m + 1) * mel_step);
    double right = MelToHz(mel_low + (m + 2) * mel_step);
    center_hz_(m) = center;
    for (int k = 0; k < num_fft_bins; k++) {
      double f = k * opts.sample_rate / opts.fft_size;
      double w = 0.0;
      if (f > left && f <= center)
        w = (f - left) / (center - left);
      else if (f > center && f < right)
        w = (right - f) / (right - center);
      weights_(m, k) = w;
    }
  }
}

Matrix MelFilterbank::Apply(const Matrix &power) const {
  if (power.cols() != weights_.cols())
    throw ShapeError("power spectrum has " + std::to_string(power.cols()) +
                     " bins, filterbank expects " +
                     std::to_string(weights_.cols()));
  return power * weights_.transpose();
}

Matrix PowerSpectrum(const Matrix &frames, int fft_size) {
  if (frames.cols() > fft_size)
    throw ConfigError("frame longer than the FFT size");
  Eigen::FFT<Real> fft;
  fft.SetFlag(Eigen::FFT<Real>::HalfSpectrum);
  const int num_bins = fft_size / 2 + 1;
  Matrix power(frames.rows(), num_bins);
  std::vector<Real> buf(fft_size);
  std::vector<std::complex<Real>> spec;
  for (Eigen::Index t = 0; t < frames.rows(); t++) {
    std::fill(buf.begin(), buf.end(), 0.0);
    for (Eigen::Index i = 0; i < frames.cols(); i++) buf[i] = frames(t, i);
    fft.fwd(spec, buf);
    for (int k = 0; k < num_bins; k++) power(t, k) = std::norm(spec[k]);
  }
  return power;
}

Matrix DctMatrix(int num_ceps, int num_bins) {
  if (num_ceps > num_bins)
    throw ConfigError("more cepstra requested than mel bins");
  Matrix dct(num_ceps, num_bins);
  for (int j = 0; j < num_ceps; j++) {
    double scale = std::sqrt((j == 0 ? 1.0 : 2.0) / num_bins);
    for (int n = 0; n < num_bins; n++)
      dct(j, n) =
          scale * std::cos(std::numbers::pi * j * (n + 0.5) / num_bins);
  }
  return dct;
}

FeatureMatrix ComputeMbk(const Matrix &frames, const MelOptions &opts) {
  // Filterbanks are cheap to build (40 x 257) but get rebuilt per chunk; the
  // cost is negligible next to the FFTs.
  MelFilterbank bank(opts);
  Matrix energies = bank.Apply(PowerSpectrum(frames, opts.fft_size));
  FeatureMatrix out;
  out.kind = FeatureKind::kMbk40;
  out.values = energies.array().max(opts.log_floor).log().matrix();
  return out;
}

FeatureMatrix ComputeMfcc(const Matrix &frames, const MelOptions &opts) {
  FeatureMatrix mbk = ComputeMbk(frames, opts);
  FeatureMatrix out;
  out.kind = FeatureKind::kMfcc24;
  out.values = mbk.values * DctMatrix(opts.num_ceps, opts.num_bins).transpose();
  return out;
}

FeatureMatrix ExtractFeatures(const AudioChunk &chunk, FeatureKind kind,
                              const std::string &chunk_id,
                              const FrameOptions &frame_opts,
                              const MelOptions &mel_opts) {
  if (chunk.sample_rate != mel_opts.sample_rate)
    throw DataError(chunk_id + ": sample rate " +
                    std::to_string(chunk.sample_rate) + " does not match " +
                    std::to_string(static_cast<int>(mel_opts.sample_rate)));
  Matrix frames = FrameSignal(chunk.samples, frame_opts);
  FeatureMatrix out;
  switch (kind) {
    case FeatureKind::kMbk40:
      out = ComputeMbk(frames, mel_opts);
      break;
    case FeatureKind::kMfcc24:
      out = ComputeMfcc(frames, mel_opts);
      break;
    case FeatureKind::kDaeCode:
      throw ConfigError("DAE codes are produced by encode-dae, not from audio");
  }
  out.chunk_id = chunk_id;
  out.frame_period =
      static_cast<double>(frame_opts.hop_samples) / chunk.sample_rate;
  return out;
}

}  // namespace audiotag
