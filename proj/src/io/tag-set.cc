// io/tag-set.cc

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

#include "audiotag/io/tag-set.h"

namespace audiotag {

int TagIndex(char letter) {
  auto pos = kTagAlphabet.find(letter);
  return pos == std::string_view::npos ? -1 : static_cast<int>(pos);
}

TagSet TagSet::FromLabelString(std::string_view labels, std::string *ignored) {
  TagSet set;
  for (char c : labels) {
    int k = TagIndex(c);
    if (k >= 0) {
      set.Set(k);
    } else if (ignored != nullptr) {
      ignored->push_back(c);
    }
  }
  return set;
}

std::string TagSet::ToString() const {
  std::string out;
  for (int k = 0; k < kNumTags; k++)
    if (Has(k)) out.push_back(TagLetter(k));
  return out;
}

Vector TagSet::ToTargetVector() const {
  Vector t(kNumTags);
  for (int k = 0; k < kNumTags; k++) t(k) = Has(k) ? 1.0 : 0.0;
  return t;
}

}  // namespace audiotag
