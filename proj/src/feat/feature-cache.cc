// feat/feature-cache.cc

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

#include "audiotag/feat/feature-cache.h"

#include <cstring>
#include <fstream>

#include "audiotag/base/json-container.h"

namespace audiotag {

void WriteFeatureCache(const std::string &path,
                       const std::vector<FeatureMatrix> &matrices) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot write feature cache " + path);
  for (const auto &m : matrices) {
    nlohmann::json header = {
        {"version", kFeatureCacheVersion},
        {"kind", FeatureKindName(m.kind)},
        {"chunk_id", m.chunk_id},
        {"rows", m.NumFrames()},
        {"dims", m.Dim()},
        {"frame_period", m.frame_period},
        {"norm_stats_id", m.norm_stats_id},
        {"dtype", "f32le"},
    };
    Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm =
        m.values.cast<float>();
    std::string payload(reinterpret_cast<const char *>(rm.data()),
                        sizeof(float) * static_cast<size_t>(rm.size()));
    WriteJsonRecord(os, kFeatureCacheMagic, header, payload);
  }
}

std::vector<FeatureMatrix> ReadFeatureCache(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open feature cache " + path);
  std::vector<FeatureMatrix> out;
  while (auto header = ReadJsonHeader(is, kFeatureCacheMagic, path)) {
    FeatureMatrix m;
    Eigen::Index rows = 0, dims = 0;
    try {
      if ((*header)["version"].get<int>() != kFeatureCacheVersion)
        throw DataError(path + ": unsupported feature cache version");
      if ((*header)["dtype"].get<std::string>() != "f32le")
        throw DataError(path + ": unsupported dtype");
      m.kind = ParseFeatureKind((*header)["kind"].get<std::string>());
      m.chunk_id = (*header)["chunk_id"].get<std::string>();
      rows = (*header)["rows"].get<Eigen::Index>();
      dims = (*header)["dims"].get<Eigen::Index>();
      m.frame_period = (*header)["frame_period"].get<double>();
      m.norm_stats_id = (*header)["norm_stats_id"].get<std::string>();
    } catch (const nlohmann::json::exception &e) {
      throw DataError(path + ": bad feature cache header: " + e.what());
    } catch (const ConfigError &e) {
      throw DataError(path + ": " + e.what());
    }
    if (rows < 0 || dims < 0) throw DataError(path + ": negative shape");
    std::string payload = ReadPayload(
        is, sizeof(float) * static_cast<size_t>(rows * dims), path);
    Eigen::Map<const Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic,
                                   Eigen::RowMajor>>
        rm(reinterpret_cast<const float *>(payload.data()), rows, dims);
    m.values = rm.cast<Real>();
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace audiotag
