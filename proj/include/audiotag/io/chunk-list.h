// io/chunk-list.h

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

#ifndef AUDIOTAG_IO_CHUNK_LIST_H_
#define AUDIOTAG_IO_CHUNK_LIST_H_

#include <string>
#include <vector>

#include "audiotag/io/tag-set.h"

namespace audiotag {

// Where a chunk sits in the cross-validation protocol.  Development chunks
// carry a test fold in [0, kMaxFolds); evaluation chunks are held out of all
// development folds; chunks with no assignment are weak (raw-only) chunks
// and only ever appear in training sets.
struct FoldAssignment {
  enum class Kind { kNone, kDevelopment, kEvaluation };
  Kind kind = Kind::kNone;
  int index = -1;

  static constexpr int kMaxFolds = 5;

  static FoldAssignment None() { return {}; }
  static FoldAssignment Development(int k) { return {Kind::kDevelopment, k}; }
  static FoldAssignment Evaluation() { return {Kind::kEvaluation, -1}; }

  // Accepts "" (none), "0".."4", "eval" / "evaluation".  Anything else is a
  // ConfigError.
  static FoldAssignment Parse(const std::string &text);
  std::string ToString() const;

  bool operator==(const FoldAssignment &o) const {
    return kind == o.kind && index == o.index;
  }
};

enum class Refinement { kRefined, kRawOnly };

struct ChunkRecord {
  std::string chunk_id;
  std::string audio_path;
  TagSet tags;
  // Rows with an empty label field.  Their tag set is empty by construction
  // and they are usable only as unlabeled audio.
  bool unlabeled = false;
  Refinement refinement = Refinement::kRawOnly;
  FoldAssignment fold;
};

// Selects the train/test partition for one experiment run.
struct FoldSelection {
  // A development fold index, or kEvaluationFold for the held-out set.
  int fold = 0;
  // Add raw-only chunks to the training set.
  bool include_weak = true;

  static constexpr int kEvaluationFold = -1;
};

class ChunkList {
 public:
  ChunkList() = default;
  explicit ChunkList(std::vector<ChunkRecord> records);

  const std::vector<ChunkRecord> &records() const { return records_; }
  size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  // Number of distinct development folds present.
  int NumFolds() const;
  // Development folds present, ascending.
  std::vector<int> Folds() const;

  std::vector<ChunkRecord> TrainingSet(const FoldSelection &sel) const;
  std::vector<ChunkRecord> TestSet(const FoldSelection &sel) const;

  size_t NumTraining(const FoldSelection &sel) const {
    return TrainingSet(sel).size();
  }
  size_t NumTest(const FoldSelection &sel) const {
    return TestSet(sel).size();
  }

 private:
  std::vector<ChunkRecord> records_;
};

// Reads a UTF-8 chunk list with columns `chunk_id,labels[,fold]` and an
// optional header row.  When `fold_spec_path` is non-empty, it names a
// second CSV of `chunk_id,fold` rows whose assignments override the third
// column.  Audio paths resolve to `<audio_dir>/<chunk_id>.wav`.
//
// Malformed rows raise DataError naming the file and line; unknown fold ids
// raise ConfigError.  Chunks with any fold assignment are refined; the rest
// are raw-only.
ChunkList LoadChunkList(const std::string &csv_path,
                        const std::string &fold_spec_path = "",
                        const std::string &audio_dir = "");

}  // namespace audiotag

#endif  // AUDIOTAG_IO_CHUNK_LIST_H_
