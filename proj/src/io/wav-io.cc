// io/wav-io.cc

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

#include "audiotag/io/wav-io.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include <spdlog/spdlog.h>

namespace audiotag {

namespace {

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatExtensible = 0xFFFE;

uint16_t Le16(const unsigned char *p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}
uint32_t Le32(const unsigned char *p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) |
         (static_cast<uint32_t>(p[3]) << 24);
}
void PutLe16(std::string *out, uint16_t v) {
  out->push_back(static_cast<char>(v & 0xff));
  out->push_back(static_cast<char>(v >> 8));
}
void PutLe32(std::string *out, uint32_t v) {
  for (int i = 0; i < 4; i++) out->push_back(static_cast<char>(v >> (8 * i)));
}

}  // namespace

AudioChunk ReadWav(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open wav file " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  auto fail = [&](const std::string &msg) -> DataError {
    return DataError(path + ": " + msg);
  };
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw fail("not a RIFF/WAVE file");

  bool have_fmt = false;
  uint16_t channels = 0, bits = 0;
  uint32_t rate = 0;
  const unsigned char *data = nullptr;
  size_t data_size = 0;

  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char *hdr = bytes.data() + pos;
    uint32_t size = Le32(hdr + 4);
    size_t body = pos + 8;
    size_t avail = bytes.size() - body;
    if (std::memcmp(hdr, "fmt ", 4) == 0) {
      if (size < 16 || avail < 16) throw fail("truncated fmt chunk");
      const unsigned char *f = bytes.data() + body;
      uint16_t format = Le16(f);
      channels = Le16(f + 2);
      rate = Le32(f + 4);
      bits = Le16(f + 14);
      if (format == kFormatExtensible) {
        if (size < 40 || avail < 40) throw fail("truncated extensible fmt");
        format = Le16(f + 24);  // first two bytes of the subformat GUID
      }
      if (format != kFormatPcm)
        throw fail("unsupported encoding " + std::to_string(format) +
                   " (need integer PCM)");
      have_fmt = true;
    } else if (std::memcmp(hdr, "data", 4) == 0) {
      data = bytes.data() + body;
      // Some writers leave the size field at 0 or 0xffffffff when streaming.
      data_size = std::min<size_t>(size, avail);
      break;
    }
    pos = body + size + (size & 1);
  }
  if (!have_fmt) throw fail("missing fmt chunk");
  if (data == nullptr) throw fail("missing data chunk");
  if (channels != 1)
    throw fail("expected mono, got " + std::to_string(channels) + " channels");
  if (rate != static_cast<uint32_t>(kSampleRate))
    throw fail("expected 16000 Hz, got " + std::to_string(rate) + " Hz");
  if (bits != 16)
    throw fail("expected 16-bit samples, got " + std::to_string(bits));

  AudioChunk chunk;
  chunk.sample_rate = static_cast<int>(rate);
  size_t n = data_size / 2;
  chunk.samples.resize(n);
  for (size_t i = 0; i < n; i++) {
    auto s = static_cast<int16_t>(Le16(data + 2 * i));
    chunk.samples[i] = static_cast<Real>(s) / 32768.0;
  }
  return chunk;
}

void WriteWav(const std::string &path, std::span<const Real> samples,
              int sample_rate) {
  std::string out;
  uint32_t data_bytes = static_cast<uint32_t>(samples.size() * 2);
  out.reserve(44 + data_bytes);
  out += "RIFF";
  PutLe32(&out, 36 + data_bytes);
  out += "WAVEfmt ";
  PutLe32(&out, 16);
  PutLe16(&out, kFormatPcm);
  PutLe16(&out, 1);
  PutLe32(&out, static_cast<uint32_t>(sample_rate));
  PutLe32(&out, static_cast<uint32_t>(sample_rate) * 2);
  PutLe16(&out, 2);
  PutLe16(&out, 16);
  out += "data";
  PutLe32(&out, data_bytes);
  for (Real x : samples) {
    double v = std::round(std::clamp(x, -1.0, 1.0) * 32768.0);
    v = std::clamp(v, -32768.0, 32767.0);
    PutLe16(&out, static_cast<uint16_t>(static_cast<int16_t>(v)));
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot write wav file " + path);
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
}

void FitChunkLength(AudioChunk *chunk, size_t length) {
  chunk->samples.resize(length, 0.0);
}

AudioChunk ReadChunkAudio(const std::string &path) {
  AudioChunk chunk = ReadWav(path);
  size_t n = chunk.samples.size();
  size_t diff = n > kChunkSamples ? n - kChunkSamples : kChunkSamples - n;
  if (diff > 160)
    spdlog::warn("{}: {} samples, fitted to {}", path, n, kChunkSamples);
  FitChunkLength(&chunk);
  return chunk;
}

}  // namespace audiotag
