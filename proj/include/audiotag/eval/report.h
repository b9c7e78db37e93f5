// eval/report.h

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

#ifndef AUDIOTAG_EVAL_REPORT_H_
#define AUDIOTAG_EVAL_REPORT_H_

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "audiotag/eval/metrics.h"

namespace audiotag {

struct TagMetrics {
  std::optional<Real> eer;  // empty when undefined (single-class truth)
  PrfResult prf;
  int positives = 0;
  int negatives = 0;
};

using TagEerRow = std::array<std::optional<Real>, kNumTags>;

struct EvalReport {
  std::string name;
  Real threshold = 0.4;
  std::array<TagMetrics, kNumTags> tags;

  // Fold breakdown of an aggregated report; empty for a single set.  A
  // missing fold keeps its label and an all-empty row.
  std::vector<std::string> fold_labels;
  std::vector<TagEerRow> fold_eer;
  std::vector<std::string> missing_folds;

  // Mean over tags of the per-tag EER; empty when no tag is defined.
  std::optional<Real> average_eer;
  // Every tag defined in every fold.
  bool complete = true;

  // Means over tags; F is the harmonic mean of the averaged P and R.
  PrfResult AveragePrf() const;
};

// Metrics of one scored set.
EvalReport Evaluate(const ScoredSet &scored, const std::string &name,
                    Real threshold = 0.4);

// Unweighted mean over the available folds per tag, then the mean over tags.
// Precision, recall and F are recomputed from counts pooled over folds.  An
// empty entry marks a missing fold: it is listed, never imputed.
EvalReport AggregateFolds(std::span<const std::optional<EvalReport>> folds,
                          std::span<const std::string> labels,
                          const std::string &name);

// CSV with one row per tag plus "Average":
//   tag,eer,precision,recall,f_score,tp,fp,fn,positives,negatives[,eer_<fold>...]
// Undefined values are written as NA.
std::string ReportCsv(const EvalReport &r);
void WriteReportCsv(const EvalReport &r, const std::string &path);
// Named after the file stem.  DataError on a malformed file or a tag column
// that is not exactly b c f m o p v.
EvalReport ReadReportCsv(const std::string &path);

// | Tags | b | c | f | m | o | p | v | Average |, one row per report.
std::string ReportMarkdown(std::span<const EvalReport> reports);

// EER table of several reports in argument order followed by rows
// "<name> - <first>" holding the per-tag differences to the first report.
// Markdown when `markdown`, CSV otherwise.  ConfigError with fewer than two
// reports.
std::string CompareReports(std::span<const EvalReport> reports, bool markdown);

// threshold,fpr,fnr for every ROC vertex of one tag.
std::string RocCsv(const ScoredSet &scored, int tag);

}  // namespace audiotag

#endif  // AUDIOTAG_EVAL_REPORT_H_
