// feat/norm-stats.cc

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

#include "audiotag/feat/norm-stats.h"

#include <cmath>

#include <spdlog/spdlog.h>

namespace audiotag {

std::string NormStats::Id() const {
  std::string bytes;
  bytes.append(reinterpret_cast<const char *>(mean.data()),
               sizeof(Real) * mean.size());
  bytes.append(reinterpret_cast<const char *>(stddev.data()),
               sizeof(Real) * stddev.size());
  return Sha256Hex(bytes).substr(0, 16);
}

NormStats FitNormStats(std::span<const FeatureMatrix> corpus) {
  if (corpus.empty()) throw DataError("cannot fit norm stats on no data");
  const Eigen::Index dim = corpus.front().Dim();
  Eigen::Index count = 0;
  Vector sum = Vector::Zero(dim);
  for (const auto &m : corpus) {
    if (m.Dim() != dim)
      throw ShapeError("norm stats corpus mixes dimensions " +
                       std::to_string(dim) + " and " +
                       std::to_string(m.Dim()));
    sum += m.values.colwise().sum().transpose();
    count += m.NumFrames();
  }
  if (count == 0) throw DataError("cannot fit norm stats on zero frames");

  NormStats stats;
  stats.mean = sum / static_cast<Real>(count);
  // Second pass about the mean; avoids the cancellation of sum-of-squares.
  Vector sq = Vector::Zero(dim);
  for (const auto &m : corpus)
    sq += (m.values.rowwise() - stats.mean.transpose())
              .array()
              .square()
              .colwise()
              .sum()
              .matrix()
              .transpose();
  stats.stddev = (sq / static_cast<Real>(count)).array().sqrt().matrix();

  int floored = 0;
  for (Eigen::Index d = 0; d < dim; d++) {
    if (!(stats.stddev(d) >= kStdFloor)) {
      stats.stddev(d) = kStdFloor;
      floored++;
    }
  }
  if (floored > 0)
    spdlog::warn("{} of {} feature dimensions have (near) zero variance; "
                 "stddev floored at {}", floored, dim, kStdFloor);
  return stats;
}

FeatureMatrix ApplyNorm(const FeatureMatrix &m, const NormStats &stats) {
  if (m.Dim() != stats.Dim())
    throw ShapeError("features have " + std::to_string(m.Dim()) +
                     " dims, norm stats " + std::to_string(stats.Dim()));
  FeatureMatrix out = m;
  out.values = ((m.values.rowwise() - stats.mean.transpose()).array()
                    .rowwise() /
                stats.stddev.transpose().array())
                   .matrix();
  out.norm_stats_id = stats.Id();
  return out;
}

FeatureMatrix InvertNorm(const FeatureMatrix &m, const NormStats &stats) {
  if (m.Dim() != stats.Dim())
    throw ShapeError("features have " + std::to_string(m.Dim()) +
                     " dims, norm stats " + std::to_string(stats.Dim()));
  FeatureMatrix out = m;
  out.values = ((m.values.array().rowwise() *
                 stats.stddev.transpose().array())
                    .rowwise() +
                stats.mean.transpose().array())
                   .matrix();
  out.norm_stats_id.clear();
  return out;
}

}  // namespace audiotag
