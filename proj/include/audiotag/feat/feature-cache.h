// feat/feature-cache.h

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

#ifndef AUDIOTAG_FEAT_FEATURE_CACHE_H_
#define AUDIOTAG_FEAT_FEATURE_CACHE_H_

#include <string>
#include <vector>

#include "audiotag/feat/feature-matrix.h"

namespace audiotag {

// Feature cache files hold one record per chunk, back to back:
//
//   "ATFEAT01"                   8-byte magic
//   uint64 little-endian         JSON header length H
//   H bytes of JSON              {"version": 1, "kind": "mbk",
//                                 "chunk_id": "...", "rows": 399,
//                                 "dims": 40, "frame_period": 0.01,
//                                 "norm_stats_id": "", "dtype": "f32le"}
//   rows * dims * 4 bytes        row-major IEEE-754 float32, little-endian
//
// Values are narrowed to float32 on write.
inline constexpr char kFeatureCacheMagic[] = "ATFEAT01";
inline constexpr int kFeatureCacheVersion = 1;

void WriteFeatureCache(const std::string &path,
                       const std::vector<FeatureMatrix> &matrices);
std::vector<FeatureMatrix> ReadFeatureCache(const std::string &path);

}  // namespace audiotag

#endif  // AUDIOTAG_FEAT_FEATURE_CACHE_H_
