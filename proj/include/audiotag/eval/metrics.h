// eval/metrics.h

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

#ifndef AUDIOTAG_EVAL_METRICS_H_
#define AUDIOTAG_EVAL_METRICS_H_

#include <span>
#include <string>
#include <vector>

#include "audiotag/io/tag-set.h"

namespace audiotag {

struct ScoredEntry {
  std::string chunk_id;
  int tag = 0;
  Real score = 0.0;
  bool truth = false;
};

// Ranking inputs: one (score, truth) pair per chunk and tag.
class ScoredSet {
 public:
  // DataError on a non-finite score or an out-of-range tag.
  void Add(const std::string &chunk_id, int tag, Real score, bool truth);
  // All seven tags of one chunk.
  void AddChunk(const std::string &chunk_id, const Vector &scores,
                const TagSet &truth);

  const std::vector<ScoredEntry> &entries() const { return entries_; }
  // DataError unless every chunk has exactly one entry per tag.
  void Validate() const;
  // Scores and truths of one tag, in insertion order.
  void TagColumn(int tag, std::vector<Real> *scores,
                 std::vector<bool> *truth) const;

 private:
  std::vector<ScoredEntry> entries_;
};

// A ROC vertex: every chunk scoring at or above `threshold` is called
// positive.  The first vertex (threshold +inf) has FPR 0 and FNR 1.
struct OperatingPoint {
  Real threshold = 0.0;
  Real fpr = 0.0;
  Real fnr = 0.0;
};

// Vertices for the distinct scores in decreasing order; tied scores form a
// single step.
std::vector<OperatingPoint> OperatingPoints(std::span<const Real> scores,
                                            const std::vector<bool> &truth);

// Crossing of FNR and FPR, interpolated linearly between the two vertices
// where FNR - FPR changes sign.  DataError when the truth has one class
// only.
Real ComputeEer(std::span<const Real> scores, const std::vector<bool> &truth);
Real ComputeEer(const ScoredSet &scored, int tag);

// Decisions are score > threshold.  Ratios with a zero denominator are
// reported as 0 and flagged.
struct PrfResult {
  Real precision = 0.0;
  Real recall = 0.0;
  Real f_score = 0.0;
  int tp = 0, fp = 0, fn = 0, tn = 0;
  bool precision_undefined = false;
  bool recall_undefined = false;
  bool f_undefined = false;
};

PrfResult PrfFromCounts(int tp, int fp, int fn, int tn = 0);
PrfResult ComputePrf(std::span<const Real> scores,
                     const std::vector<bool> &truth, Real threshold = 0.4);
PrfResult ComputePrf(const ScoredSet &scored, int tag, Real threshold = 0.4);

}  // namespace audiotag

#endif  // AUDIOTAG_EVAL_METRICS_H_
