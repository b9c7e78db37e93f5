// eval/report.cc

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

#include "audiotag/eval/report.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <spdlog/spdlog.h>

namespace audiotag {

namespace {

// Digits after the point in report CSVs; enough that reread values keep
// F consistent with P and R.
constexpr int kCsvDigits = 12;

std::string Fixed(Real v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string Opt(const std::optional<Real> &v, int digits,
                const char *missing = "NA") {
  return v ? Fixed(*v, digits) : std::string(missing);
}

std::optional<Real> MeanOfDefined(std::span<const std::optional<Real>> values,
                                  bool *all_defined) {
  Real sum = 0.0;
  int n = 0;
  for (const auto &v : values) {
    if (v) {
      sum += *v;
      n++;
    } else if (all_defined) {
      *all_defined = false;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / n;
}

std::vector<std::string> SplitCsv(const std::string &line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::optional<Real> ParseOpt(const std::string &s, const std::string &what) {
  if (s == "NA") return std::nullopt;
  try {
    size_t used = 0;
    Real v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception &) {
    throw DataError(what + ": '" + s + "' is not a number");
  }
}

int ParseCount(const std::string &s, const std::string &what) {
  try {
    size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size() || v < 0) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception &) {
    throw DataError(what + ": '" + s + "' is not a count");
  }
}

}  // namespace

PrfResult EvalReport::AveragePrf() const {
  PrfResult r;
  for (const auto &t : tags) {
    r.precision += t.prf.precision / kNumTags;
    r.recall += t.prf.recall / kNumTags;
    r.tp += t.prf.tp;
    r.fp += t.prf.fp;
    r.fn += t.prf.fn;
    r.tn += t.prf.tn;
    r.precision_undefined |= t.prf.precision_undefined;
    r.recall_undefined |= t.prf.recall_undefined;
  }
  if (r.precision + r.recall > 0.0)
    r.f_score = 2.0 * r.precision * r.recall / (r.precision + r.recall);
  else
    r.f_undefined = true;
  return r;
}

EvalReport Evaluate(const ScoredSet &scored, const std::string &name,
                    Real threshold) {
  scored.Validate();
  EvalReport r;
  r.name = name;
  r.threshold = threshold;
  std::array<std::optional<Real>, kNumTags> eers;
  for (int k = 0; k < kNumTags; k++) {
    std::vector<Real> s;
    std::vector<bool> t;
    scored.TagColumn(k, &s, &t);
    TagMetrics &m = r.tags[static_cast<size_t>(k)];
    m.positives = static_cast<int>(std::count(t.begin(), t.end(), true));
    m.negatives = static_cast<int>(t.size()) - m.positives;
    if (m.positives > 0 && m.negatives > 0) {
      m.eer = ComputeEer(s, t);
    } else {
      spdlog::warn("{}: EER for tag {} undefined ({} positive, {} negative "
                   "chunks)",
                   name, TagLetter(k), m.positives, m.negatives);
    }
    m.prf = ComputePrf(s, t, threshold);
    eers[static_cast<size_t>(k)] = m.eer;
  }
  r.average_eer = MeanOfDefined(eers, &r.complete);
  return r;
}

EvalReport AggregateFolds(std::span<const std::optional<EvalReport>> folds,
                          std::span<const std::string> labels,
                          const std::string &name) {
  if (folds.size() != labels.size())
    throw ShapeError("one label per fold is required");
  EvalReport out;
  out.name = name;
  bool any = false;
  std::array<std::vector<std::optional<Real>>, kNumTags> per_tag;
  std::array<PrfResult, kNumTags> pooled{};
  for (size_t f = 0; f < folds.size(); f++) {
    out.fold_labels.push_back(labels[f]);
    TagEerRow row{};
    if (!folds[f]) {
      out.missing_folds.push_back(labels[f]);
      out.fold_eer.push_back(row);
      out.complete = false;
      spdlog::warn("{}: fold {} missing from the aggregate", name, labels[f]);
      continue;
    }
    const EvalReport &r = *folds[f];
    if (!any) out.threshold = r.threshold;
    any = true;
    for (int k = 0; k < kNumTags; k++) {
      const TagMetrics &m = r.tags[static_cast<size_t>(k)];
      row[static_cast<size_t>(k)] = m.eer;
      per_tag[static_cast<size_t>(k)].push_back(m.eer);
      auto &p = pooled[static_cast<size_t>(k)];
      p.tp += m.prf.tp;
      p.fp += m.prf.fp;
      p.fn += m.prf.fn;
      p.tn += m.prf.tn;
      out.tags[static_cast<size_t>(k)].positives += m.positives;
      out.tags[static_cast<size_t>(k)].negatives += m.negatives;
    }
    out.fold_eer.push_back(row);
  }
  if (!any) throw DataError(name + ": no folds to aggregate");

  std::array<std::optional<Real>, kNumTags> tag_means;
  for (int k = 0; k < kNumTags; k++) {
    auto &m = out.tags[static_cast<size_t>(k)];
    m.eer = MeanOfDefined(per_tag[static_cast<size_t>(k)], &out.complete);
    const auto &p = pooled[static_cast<size_t>(k)];
    m.prf = PrfFromCounts(p.tp, p.fp, p.fn, p.tn);
    tag_means[static_cast<size_t>(k)] = m.eer;
  }
  out.average_eer = MeanOfDefined(tag_means, &out.complete);
  if (!out.complete)
    spdlog::warn("{}: EER grid incomplete; averages cover defined cells only",
                 name);
  return out;
}

std::string ReportCsv(const EvalReport &r) {
  std::ostringstream os;
  os << "tag,eer,precision,recall,f_score,tp,fp,fn,positives,negatives";
  for (const auto &l : r.fold_labels) os << ",eer_" << l;
  os << "\n";
  auto fold_cells = [&](auto cell) {
    for (size_t f = 0; f < r.fold_labels.size(); f++) os << "," << cell(f);
  };
  int pos = 0, neg = 0;
  for (int k = 0; k < kNumTags; k++) {
    const TagMetrics &m = r.tags[static_cast<size_t>(k)];
    pos += m.positives;
    neg += m.negatives;
    os << TagLetter(k) << "," << Opt(m.eer, kCsvDigits) << ","
       << Fixed(m.prf.precision, kCsvDigits) << "," << Fixed(m.prf.recall, kCsvDigits) << ","
       << Fixed(m.prf.f_score, kCsvDigits) << "," << m.prf.tp << "," << m.prf.fp << ","
       << m.prf.fn << "," << m.positives << "," << m.negatives;
    fold_cells([&](size_t f) {
      return Opt(r.fold_eer[f][static_cast<size_t>(k)], kCsvDigits);
    });
    os << "\n";
  }
  PrfResult avg = r.AveragePrf();
  os << "Average," << Opt(r.average_eer, kCsvDigits) << "," << Fixed(avg.precision, kCsvDigits)
     << "," << Fixed(avg.recall, kCsvDigits) << "," << Fixed(avg.f_score, kCsvDigits) << ","
     << avg.tp << "," << avg.fp << "," << avg.fn << "," << pos << "," << neg;
  fold_cells([&](size_t f) {
    return Opt(MeanOfDefined(r.fold_eer[f], nullptr), kCsvDigits);
  });
  os << "\n";
  return os.str();
}

void WriteReportCsv(const EvalReport &r, const std::string &path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot write report " + path);
  os << ReportCsv(r);
}

EvalReport ReadReportCsv(const std::string &path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open report " + path);
  EvalReport r;
  r.name = std::filesystem::path(path).stem().string();
  std::string line;
  if (!std::getline(is, line)) throw DataError(path + ": empty report");
  std::vector<std::string> header = SplitCsv(line);
  const std::vector<std::string> expected = {
      "tag", "eer", "precision", "recall", "f_score",
      "tp",  "fp",  "fn",        "positives", "negatives"};
  if (header.size() < expected.size() ||
      !std::equal(expected.begin(), expected.end(), header.begin()))
    throw DataError(path + ": not an evaluation report");
  for (size_t c = expected.size(); c < header.size(); c++) {
    if (header[c].rfind("eer_", 0) != 0)
      throw DataError(path + ": unexpected column '" + header[c] + "'");
    r.fold_labels.push_back(header[c].substr(4));
  }
  r.fold_eer.assign(r.fold_labels.size(), TagEerRow{});

  std::string tags_seen;
  bool saw_average = false;
  int lineno = 1;
  while (std::getline(is, line)) {
    lineno++;
    if (line.empty()) continue;
    std::vector<std::string> f = SplitCsv(line);
    std::string where = path + ":" + std::to_string(lineno);
    if (f.size() != header.size())
      throw DataError(where + ": expected " + std::to_string(header.size()) +
                      " fields");
    if (f[0] == "Average") {
      r.average_eer = ParseOpt(f[1], where);
      saw_average = true;
      continue;
    }
    if (f[0].size() != 1 || TagIndex(f[0][0]) < 0)
      throw DataError(where + ": unknown tag '" + f[0] + "'");
    int k = TagIndex(f[0][0]);
    tags_seen += f[0];
    TagMetrics &m = r.tags[static_cast<size_t>(k)];
    m.eer = ParseOpt(f[1], where);
    m.prf = PrfFromCounts(ParseCount(f[5], where), ParseCount(f[6], where),
                          ParseCount(f[7], where));
    m.positives = ParseCount(f[8], where);
    m.negatives = ParseCount(f[9], where);
    for (size_t c = 0; c < r.fold_labels.size(); c++)
      r.fold_eer[c][static_cast<size_t>(k)] = ParseOpt(f[10 + c], where);
  }
  if (tags_seen != kTagAlphabet)
    throw DataError(path + ": tag rows '" + tags_seen + "' do not match '" +
                    std::string(kTagAlphabet) + "'");
  if (!saw_average) throw DataError(path + ": missing Average row");
  for (const auto &t : r.tags)
    if (!t.eer) r.complete = false;
  return r;
}

std::string ReportMarkdown(std::span<const EvalReport> reports) {
  std::ostringstream os;
  os << "| Tags |";
  for (char c : kTagAlphabet) os << " " << c << " |";
  os << " Average |\n|---|";
  for (int k = 0; k <= kNumTags; k++) os << "---|";
  os << "\n";
  for (const auto &r : reports) {
    os << "| " << r.name << " |";
    for (const auto &t : r.tags) os << " " << Opt(t.eer, 3, "-") << " |";
    os << " " << Opt(r.average_eer, 3, "-") << " |\n";
  }
  return os.str();
}

std::string CompareReports(std::span<const EvalReport> reports,
                           bool markdown) {
  if (reports.size() < 2)
    throw ConfigError("comparison needs at least two reports");
  struct Row {
    std::string name;
    std::array<std::optional<Real>, kNumTags + 1> v;
  };
  auto values = [](const EvalReport &r) {
    std::array<std::optional<Real>, kNumTags + 1> v;
    for (int k = 0; k < kNumTags; k++)
      v[static_cast<size_t>(k)] = r.tags[static_cast<size_t>(k)].eer;
    v[kNumTags] = r.average_eer;
    return v;
  };
  std::vector<Row> rows;
  for (const auto &r : reports) rows.push_back({r.name, values(r)});
  const auto base = values(reports[0]);
  for (size_t i = 1; i < reports.size(); i++) {
    Row d{reports[i].name + " - " + reports[0].name, {}};
    auto v = values(reports[i]);
    for (size_t k = 0; k <= kNumTags; k++)
      if (v[k] && base[k]) d.v[k] = *v[k] - *base[k];
    rows.push_back(d);
  }

  std::ostringstream os;
  if (markdown) {
    os << "| Tags |";
    for (char c : kTagAlphabet) os << " " << c << " |";
    os << " Average |\n|---|";
    for (int k = 0; k <= kNumTags; k++) os << "---|";
    os << "\n";
    for (const auto &row : rows) {
      os << "| " << row.name << " |";
      for (const auto &x : row.v) os << " " << Opt(x, 3, "-") << " |";
      os << "\n";
    }
  } else {
    os << "system";
    for (char c : kTagAlphabet) os << "," << c;
    os << ",Average\n";
    for (const auto &row : rows) {
      os << row.name;
      for (const auto &x : row.v) os << "," << Opt(x, 6);
      os << "\n";
    }
  }
  return os.str();
}

std::string RocCsv(const ScoredSet &scored, int tag) {
  std::vector<Real> s;
  std::vector<bool> t;
  scored.TagColumn(tag, &s, &t);
  std::ostringstream os;
  os << "threshold,fpr,fnr\n";
  for (const auto &p : OperatingPoints(s, t)) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%.17g,%.9f,%.9f", p.threshold, p.fpr,
                  p.fnr);
    os << buf << "\n";
  }
  return os.str();
}

}  // namespace audiotag
