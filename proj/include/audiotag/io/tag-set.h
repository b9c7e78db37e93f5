// io/tag-set.h

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

#ifndef AUDIOTAG_IO_TAG_SET_H_
#define AUDIOTAG_IO_TAG_SET_H_

#include <bitset>
#include <string>
#include <string_view>

#include "audiotag/base/audiotag-common.h"

namespace audiotag {

// The seven domestic-audio label classes, in canonical report order:
//   b broadband noise, c child speech, f adult female speech,
//   m adult male speech, o other identifiable sounds,
//   p percussive sounds, v video game / TV.
inline constexpr int kNumTags = 7;
inline constexpr std::string_view kTagAlphabet = "bcfmopv";

// Index of `letter` in kTagAlphabet, or -1.
int TagIndex(char letter);
inline char TagLetter(int index) { return kTagAlphabet[index]; }

class TagSet {
 public:
  TagSet() = default;

  // Parses a concatenated label string such as "cmv".  Letters outside the
  // alphabet are skipped and appended to `*ignored` when it is non-null.
  static TagSet FromLabelString(std::string_view labels,
                                std::string *ignored = nullptr);

  bool Has(int tag) const { return bits_.test(tag); }
  void Set(int tag, bool present = true) { bits_.set(tag, present); }
  int Count() const { return static_cast<int>(bits_.count()); }
  bool Empty() const { return bits_.none(); }

  // Letters of the present tags in alphabet order, e.g. "cmv".
  std::string ToString() const;

  // 7-dim 0/1 target vector.
  Vector ToTargetVector() const;

  bool operator==(const TagSet &other) const { return bits_ == other.bits_; }
  bool operator!=(const TagSet &other) const { return bits_ != other.bits_; }

 private:
  std::bitset<kNumTags> bits_;
};

}  // namespace audiotag

#endif  // AUDIOTAG_IO_TAG_SET_H_
