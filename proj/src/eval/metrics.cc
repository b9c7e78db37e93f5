// eval/metrics.cc

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

#include "audiotag/eval/metrics.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

namespace audiotag {

void ScoredSet::Add(const std::string &chunk_id, int tag, Real score,
                    bool truth) {
  if (tag < 0 || tag >= kNumTags)
    throw DataError("tag index " + std::to_string(tag) + " out of range");
  if (!std::isfinite(score))
    throw DataError("non-finite score for chunk " + chunk_id + ", tag " +
                    TagLetter(tag));
  entries_.push_back({chunk_id, tag, score, truth});
}

void ScoredSet::AddChunk(const std::string &chunk_id, const Vector &scores,
                         const TagSet &truth) {
  if (scores.size() != kNumTags)
    throw ShapeError("chunk " + chunk_id + " needs one score per tag");
  for (int k = 0; k < kNumTags; k++) Add(chunk_id, k, scores(k), truth.Has(k));
}

void ScoredSet::Validate() const {
  std::map<std::string, std::array<int, kNumTags>> seen;
  for (const auto &e : entries_) seen[e.chunk_id][static_cast<size_t>(e.tag)]++;
  for (const auto &[id, counts] : seen)
    for (int k = 0; k < kNumTags; k++)
      if (counts[static_cast<size_t>(k)] != 1)
        throw DataError("chunk " + id + " has " +
                        std::to_string(counts[static_cast<size_t>(k)]) +
                        " entries for tag " + TagLetter(k));
}

void ScoredSet::TagColumn(int tag, std::vector<Real> *scores,
                          std::vector<bool> *truth) const {
  scores->clear();
  truth->clear();
  for (const auto &e : entries_) {
    if (e.tag != tag) continue;
    scores->push_back(e.score);
    truth->push_back(e.truth);
  }
}

std::vector<OperatingPoint> OperatingPoints(std::span<const Real> scores,
                                            const std::vector<bool> &truth) {
  if (scores.size() != truth.size())
    throw ShapeError("one truth value per score is required");
  const size_t n = scores.size();
  size_t num_pos = static_cast<size_t>(std::count(truth.begin(), truth.end(), true));
  size_t num_neg = n - num_pos;
  if (num_pos == 0 || num_neg == 0)
    throw DataError("metric undefined: truth contains a single class");

  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return scores[a] > scores[b]; });

  std::vector<OperatingPoint> pts;
  pts.push_back({std::numeric_limits<Real>::infinity(), 0.0, 1.0});
  size_t tp = 0, fp = 0;
  for (size_t i = 0; i < n;) {
    Real s = scores[order[i]];
    for (; i < n && scores[order[i]] == s; i++) (truth[order[i]] ? tp : fp)++;
    pts.push_back({s, static_cast<Real>(fp) / static_cast<Real>(num_neg),
                   1.0 - static_cast<Real>(tp) / static_cast<Real>(num_pos)});
  }
  return pts;
}

Real ComputeEer(std::span<const Real> scores, const std::vector<bool> &truth) {
  std::vector<OperatingPoint> pts = OperatingPoints(scores, truth);
  // FNR - FPR falls from 1 to -1 along the curve.
  for (size_t i = 1; i < pts.size(); i++) {
    Real d = pts[i].fnr - pts[i].fpr;
    if (d > 0.0) continue;
    if (d == 0.0) return pts[i].fnr;
    Real d0 = pts[i - 1].fnr - pts[i - 1].fpr;
    Real a = d0 / (d0 - d);
    return pts[i - 1].fnr + a * (pts[i].fnr - pts[i - 1].fnr);
  }
  return pts.back().fnr;  // not reached: the last vertex has d = -1
}

Real ComputeEer(const ScoredSet &scored, int tag) {
  std::vector<Real> s;
  std::vector<bool> t;
  scored.TagColumn(tag, &s, &t);
  return ComputeEer(s, t);
}

PrfResult PrfFromCounts(int tp, int fp, int fn, int tn) {
  PrfResult r;
  r.tp = tp;
  r.fp = fp;
  r.fn = fn;
  r.tn = tn;
  if (tp + fp > 0)
    r.precision = static_cast<Real>(tp) / (tp + fp);
  else
    r.precision_undefined = true;
  if (tp + fn > 0)
    r.recall = static_cast<Real>(tp) / (tp + fn);
  else
    r.recall_undefined = true;
  if (r.precision + r.recall > 0.0)
    r.f_score = 2.0 * r.precision * r.recall / (r.precision + r.recall);
  else
    r.f_undefined = true;
  return r;
}

PrfResult ComputePrf(std::span<const Real> scores,
                     const std::vector<bool> &truth, Real threshold) {
  if (scores.size() != truth.size())
    throw ShapeError("one truth value per score is required");
  int tp = 0, fp = 0, fn = 0, tn = 0;
  for (size_t i = 0; i < scores.size(); i++) {
    bool pred = scores[i] > threshold;
    if (pred && truth[i]) tp++;
    else if (pred) fp++;
    else if (truth[i]) fn++;
    else tn++;
  }
  return PrfFromCounts(tp, fp, fn, tn);
}

PrfResult ComputePrf(const ScoredSet &scored, int tag, Real threshold) {
  std::vector<Real> s;
  std::vector<bool> t;
  scored.TagColumn(tag, &s, &t);
  return ComputePrf(s, t, threshold);
}

}  // namespace audiotag
