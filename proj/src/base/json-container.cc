// base/json-container.cc

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

#include "audiotag/base/json-container.h"

#include <cstdint>

#include "audiotag/base/audiotag-common.h"

namespace audiotag {

void WriteJsonRecord(std::ostream &os, const std::string &magic,
                     const nlohmann::json &header,
                     const std::string &payload) {
  std::string text = header.dump();
  uint64_t len = text.size();
  os.write(magic.data(), static_cast<std::streamsize>(magic.size()));
  os.write(reinterpret_cast<const char *>(&len), sizeof(len));
  os.write(text.data(), static_cast<std::streamsize>(text.size()));
  os.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  if (!os) throw DataError("write failed");
}

std::optional<nlohmann::json> ReadJsonHeader(std::istream &is,
                                             const std::string &magic,
                                             const std::string &what) {
  std::string got(magic.size(), '\0');
  is.read(got.data(), static_cast<std::streamsize>(got.size()));
  if (is.gcount() == 0 && is.eof()) return std::nullopt;
  if (static_cast<size_t>(is.gcount()) != magic.size() || got != magic)
    throw DataError(what + ": bad magic (expected " + magic + ")");
  uint64_t len = 0;
  is.read(reinterpret_cast<char *>(&len), sizeof(len));
  if (!is || len > (1u << 30)) throw DataError(what + ": truncated header");
  std::string text(len, '\0');
  is.read(text.data(), static_cast<std::streamsize>(len));
  if (!is) throw DataError(what + ": truncated header");
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception &e) {
    throw DataError(what + ": malformed JSON header: " + e.what());
  }
}

std::string ReadPayload(std::istream &is, size_t bytes,
                        const std::string &what) {
  std::string payload(bytes, '\0');
  is.read(payload.data(), static_cast<std::streamsize>(bytes));
  if (static_cast<size_t>(is.gcount()) != bytes)
    throw DataError(what + ": truncated payload");
  return payload;
}

}  // namespace audiotag
