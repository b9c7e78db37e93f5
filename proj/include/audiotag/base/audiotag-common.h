// base/audiotag-common.h

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

#ifndef AUDIOTAG_BASE_AUDIOTAG_COMMON_H_
#define AUDIOTAG_BASE_AUDIOTAG_COMMON_H_

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace audiotag {

using Real = double;
using Matrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
using Vector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
using RowVector = Eigen::Matrix<Real, 1, Eigen::Dynamic>;

// All stochastic components draw from this engine; its output sequence is
// fixed by the standard, so seeded runs are reproducible across platforms.
using Rng = std::mt19937_64;

// Process exit codes shared by every command-line entry point.
enum class ExitCode : int {
  kSuccess = 0,
  kUsage = 1,
  kConfig = 2,
  kData = 3,
  kNumeric = 4,
};

class Error : public std::runtime_error {
 public:
  Error(const std::string &what, ExitCode code)
      : std::runtime_error(what), code_(code) {}
  ExitCode code() const { return code_; }

 private:
  ExitCode code_;
};

// Invalid settings, unknown fold ids, inconsistent hyperparameters.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string &what)
      : Error(what, ExitCode::kConfig) {}
};

// Malformed inputs: CSV rows, WAV containers, cache files, model files.
class DataError : public Error {
 public:
  explicit DataError(const std::string &what) : Error(what, ExitCode::kData) {}
};

// Dimension mismatch between a model and the data fed to it.
class ShapeError : public DataError {
 public:
  explicit ShapeError(const std::string &what) : DataError(what) {}
};

// Divergence, non-finite losses, degenerate optimisation problems.
class NumericError : public Error {
 public:
  explicit NumericError(const std::string &what)
      : Error(what, ExitCode::kNumeric) {}
};

// Derives an independent seed for a named stage from a master seed.  The
// mapping runs std::seed_seq over the two 32-bit halves of the master seed
// followed by the bytes of the stage name, and packs the first two generated
// words into a 64-bit value.  std::seed_seq's algorithm is fully specified,
// so the result is identical on every conforming implementation.
uint64_t DeriveSeed(uint64_t master_seed, const std::string &stage);

// Lowercase hex SHA-256 of a byte string.
std::string Sha256Hex(const std::string &bytes);
std::string Sha256FileHex(const std::string &path);

}  // namespace audiotag

#endif  // AUDIOTAG_BASE_AUDIOTAG_COMMON_H_
