// base/json-container.h

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

#ifndef AUDIOTAG_BASE_JSON_CONTAINER_H_
#define AUDIOTAG_BASE_JSON_CONTAINER_H_

#include <bit>
#include <istream>
#include <optional>
#include <ostream>
#include <string>

#include <json.hpp>

namespace audiotag {

static_assert(std::endian::native == std::endian::little,
              "on-disk payloads are written in host order, which must be "
              "little-endian");

// Framing shared by feature caches and model files:
//
//   offset 0   8 bytes   magic (ASCII, identifies the file family)
//   offset 8   8 bytes   header length H, unsigned little-endian
//   offset 16  H bytes   UTF-8 JSON header
//   offset 16+H          payload, whose size the header determines
//
// Several records may follow each other in one file.
void WriteJsonRecord(std::ostream &os, const std::string &magic,
                     const nlohmann::json &header, const std::string &payload);

// Reads the magic and header; the caller then reads `payload_bytes(header)`
// bytes itself through ReadPayload.  Returns nullopt at a clean end of file.
// Throws DataError on a bad magic or truncated header.
std::optional<nlohmann::json> ReadJsonHeader(std::istream &is,
                                             const std::string &magic,
                                             const std::string &what);
std::string ReadPayload(std::istream &is, size_t bytes,
                        const std::string &what);

}  // namespace audiotag

#endif  // AUDIOTAG_BASE_JSON_CONTAINER_H_
