// io/chunk-list.cc

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

#include "audiotag/io/chunk-list.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <unordered_map>

#include <spdlog/spdlog.h>

namespace audiotag {

namespace {

std::string Trim(const std::string &s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string Lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::vector<std::string> SplitFields(const std::string &line) {
  std::vector<std::string> fields;
  size_t start = 0;
  while (true) {
    size_t comma = line.find(',', start);
    fields.push_back(Trim(line.substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return fields;
}

struct CsvRow {
  int line_number;
  std::vector<std::string> fields;
};

// Non-blank rows, with the header skipped when the first field reads
// "chunk_id".  A UTF-8 byte-order mark on the first line is dropped.
std::vector<CsvRow> ReadCsvRows(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::vector<CsvRow> rows;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    line_number++;
    if (line_number == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0)
      line = line.substr(3);
    if (Trim(line).empty()) continue;
    auto fields = SplitFields(line);
    if (rows.empty() && Lower(fields[0]) == "chunk_id") continue;
    rows.push_back({line_number, std::move(fields)});
  }
  return rows;
}

std::string Where(const std::string &path, int line) {
  return path + ":" + std::to_string(line);
}

}  // namespace

FoldAssignment FoldAssignment::Parse(const std::string &text) {
  std::string t = Lower(Trim(text));
  if (t.empty()) return None();
  if (t == "eval" || t == "evaluation") return Evaluation();
  if (t.size() == 1 && t[0] >= '0' && t[0] < '0' + kMaxFolds)
    return Development(t[0] - '0');
  throw ConfigError("unknown fold id '" + text + "'");
}

std::string FoldAssignment::ToString() const {
  switch (kind) {
    case Kind::kNone: return "";
    case Kind::kEvaluation: return "eval";
    case Kind::kDevelopment: return std::to_string(index);
  }
  return "";
}

ChunkList::ChunkList(std::vector<ChunkRecord> records)
    : records_(std::move(records)) {}

std::vector<int> ChunkList::Folds() const {
  std::set<int> folds;
  for (const auto &r : records_)
    if (r.fold.kind == FoldAssignment::Kind::kDevelopment)
      folds.insert(r.fold.index);
  return {folds.begin(), folds.end()};
}

int ChunkList::NumFolds() const { return static_cast<int>(Folds().size()); }

std::vector<ChunkRecord> ChunkList::TrainingSet(
    const FoldSelection &sel) const {
  using Kind = FoldAssignment::Kind;
  std::vector<ChunkRecord> out;
  for (const auto &r : records_) {
    if (r.unlabeled) continue;
    bool take = false;
    switch (r.fold.kind) {
      case Kind::kNone:
        take = sel.include_weak;
        break;
      case Kind::kDevelopment:
        take = sel.fold == FoldSelection::kEvaluationFold ||
               r.fold.index != sel.fold;
        break;
      case Kind::kEvaluation:
        take = false;
        break;
    }
    if (take) out.push_back(r);
  }
  return out;
}

std::vector<ChunkRecord> ChunkList::TestSet(const FoldSelection &sel) const {
  using Kind = FoldAssignment::Kind;
  std::vector<ChunkRecord> out;
  for (const auto &r : records_) {
    if (r.unlabeled) continue;
    bool take = sel.fold == FoldSelection::kEvaluationFold
                    ? r.fold.kind == Kind::kEvaluation
                    : (r.fold.kind == Kind::kDevelopment &&
                       r.fold.index == sel.fold);
    if (take) out.push_back(r);
  }
  return out;
}

ChunkList LoadChunkList(const std::string &csv_path,
                        const std::string &fold_spec_path,
                        const std::string &audio_dir) {
  std::vector<ChunkRecord> records;
  std::unordered_map<std::string, size_t> by_id;
  std::string all_ignored;

  for (const auto &row : ReadCsvRows(csv_path)) {
    const auto &f = row.fields;
    if (f.size() < 2 || f.size() > 3)
      throw DataError(Where(csv_path, row.line_number) + ": expected 2 or 3 "
                      "fields (chunk_id,labels[,fold]), got " +
                      std::to_string(f.size()));
    if (f[0].empty())
      throw DataError(Where(csv_path, row.line_number) + ": empty chunk id");
    if (by_id.count(f[0]))
      throw DataError(Where(csv_path, row.line_number) +
                      ": duplicate chunk id " + f[0]);

    ChunkRecord rec;
    rec.chunk_id = f[0];
    std::string ignored;
    rec.tags = TagSet::FromLabelString(f[1], &ignored);
    rec.unlabeled = f[1].empty();
    if (!rec.unlabeled && rec.tags.Empty())
      throw DataError(Where(csv_path, row.line_number) + ": label string '" +
                      f[1] + "' contains no tag from '" +
                      std::string(kTagAlphabet) + "'");
    all_ignored += ignored;
    if (f.size() == 3) {
      try {
        rec.fold = FoldAssignment::Parse(f[2]);
      } catch (const ConfigError &e) {
        throw ConfigError(Where(csv_path, row.line_number) + ": " + e.what());
      }
    }
    std::string file = rec.chunk_id;
    if (file.size() < 4 || file.substr(file.size() - 4) != ".wav")
      file += ".wav";
    rec.audio_path = audio_dir.empty()
                         ? file
                         : (std::filesystem::path(audio_dir) / file).string();
    by_id[rec.chunk_id] = records.size();
    records.push_back(std::move(rec));
  }

  if (!all_ignored.empty()) {
    std::string distinct;
    for (char c : all_ignored)
      if (distinct.find(c) == std::string::npos) distinct.push_back(c);
    spdlog::warn("{}: ignored {} label letters outside '{}' (distinct: '{}')",
                 csv_path, all_ignored.size(), kTagAlphabet, distinct);
  }

  if (!fold_spec_path.empty()) {
    for (const auto &row : ReadCsvRows(fold_spec_path)) {
      const auto &f = row.fields;
      if (f.size() != 2)
        throw DataError(Where(fold_spec_path, row.line_number) +
                        ": expected chunk_id,fold");
      auto it = by_id.find(f[0]);
      if (it == by_id.end())
        throw DataError(Where(fold_spec_path, row.line_number) +
                        ": chunk " + f[0] + " not in " + csv_path);
      try {
        records[it->second].fold = FoldAssignment::Parse(f[1]);
      } catch (const ConfigError &e) {
        throw ConfigError(Where(fold_spec_path, row.line_number) + ": " +
                          e.what());
      }
    }
  }

  for (auto &r : records)
    r.refinement = r.fold.kind == FoldAssignment::Kind::kNone
                       ? Refinement::kRawOnly
                       : Refinement::kRefined;
  return ChunkList(std::move(records));
}

}  // namespace audiotag
