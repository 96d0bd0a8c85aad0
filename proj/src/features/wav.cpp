// Copyright 2026 The TC-SKNet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <fstream>

#include "tcsk/features/audio.hpp"
#include "tcsk/util/binary_io.hpp"
#include "tcsk/util/error.hpp"

namespace tcsk {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatExtensible = 0xfffe;

std::uint16_t read_u16(std::istream& is, std::string_view what) {
  unsigned char b[2];
  is.read(reinterpret_cast<char*>(b), 2);
  if (is.gcount() != 2) throw FormatError("truncated WAV while reading " + std::string(what));
  return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
}

void write_u16(std::ostream& os, std::uint16_t v) {
  const char b[2] = {static_cast<char>(v & 0xff), static_cast<char>(v >> 8)};
  os.write(b, 2);
}

}  // namespace

AudioClip read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open WAV file " + path.string());
  const std::string where = " in " + path.string();
  try {
    binary::expect_magic(in, "RIFF", "RIFF");
    binary::read_u32(in, "RIFF size");
    binary::expect_magic(in, "WAVE", "WAVE");

    int channels = 0;
    int bits = 0;
    AudioClip clip;
    bool have_format = false;
    for (;;) {
      char id[4];
      in.read(id, 4);
      if (in.gcount() != 4) throw FormatError("no data chunk");
      const std::uint32_t size = binary::read_u32(in, "chunk size");
      const std::string chunk(id, 4);
      if (chunk == "fmt ") {
        const std::uint16_t format = read_u16(in, "format tag");
        channels = read_u16(in, "channel count");
        clip.sample_rate = static_cast<int>(binary::read_u32(in, "sample rate"));
        binary::read_u32(in, "byte rate");
        read_u16(in, "block align");
        bits = read_u16(in, "bits per sample");
        if (size > 16) in.ignore(size - 16);
        if (format != kFormatPcm && format != kFormatExtensible) {
          throw FormatError("unsupported WAV format tag " + std::to_string(format));
        }
        have_format = true;
      } else if (chunk == "data") {
        if (!have_format) throw FormatError("data chunk before fmt chunk");
        if (channels != 1) {
          throw FormatError("expected mono audio, got " + std::to_string(channels) + " channels");
        }
        if (bits != 16 && bits != 24) {
          throw FormatError("unsupported bit depth " + std::to_string(bits));
        }
        if (clip.sample_rate <= 0) throw FormatError("non-positive sample rate");
        const std::size_t width = static_cast<std::size_t>(bits / 8);
        std::vector<unsigned char> raw(size);
        in.read(reinterpret_cast<char*>(raw.data()), size);
        if (static_cast<std::uint32_t>(in.gcount()) != size) {
          throw FormatError("truncated data chunk");
        }
        const std::size_t count = size / width;
        clip.samples.resize(count);
        const double scale = bits == 16 ? 32768.0 : 8388608.0;
        for (std::size_t i = 0; i < count; ++i) {
          const unsigned char* p = raw.data() + i * width;
          std::int32_t v = 0;
          if (bits == 16) {
            v = static_cast<std::int16_t>(p[0] | (p[1] << 8));
          } else {
            v = p[0] | (p[1] << 8) | (p[2] << 16);
            if (v & 0x800000) v -= 0x1000000;
          }
          clip.samples[i] = static_cast<float>(v / scale);
        }
        if (clip.samples.empty()) throw FormatError("empty data chunk");
        return clip;
      } else {
        in.ignore(size + (size & 1));
      }
    }
  } catch (const FormatError& e) {
    throw FormatError(std::string(e.what()) + where);
  }
}

void write_wav(const std::filesystem::path& path, const AudioClip& clip, int bits_per_sample) {
  if (bits_per_sample != 16 && bits_per_sample != 24) {
    throw ConfigError("write_wav: bits per sample must be 16 or 24");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot create WAV file " + path.string());
  const std::uint32_t width = static_cast<std::uint32_t>(bits_per_sample / 8);
  const std::uint32_t data_size = static_cast<std::uint32_t>(clip.samples.size()) * width;
  binary::write_magic(out, "RIFF");
  binary::write_u32(out, 36 + data_size);
  binary::write_magic(out, "WAVE");
  binary::write_magic(out, "fmt ");
  binary::write_u32(out, 16);
  write_u16(out, kFormatPcm);
  write_u16(out, 1);
  binary::write_u32(out, static_cast<std::uint32_t>(clip.sample_rate));
  binary::write_u32(out, static_cast<std::uint32_t>(clip.sample_rate) * width);
  write_u16(out, static_cast<std::uint16_t>(width));
  write_u16(out, static_cast<std::uint16_t>(bits_per_sample));
  binary::write_magic(out, "data");
  binary::write_u32(out, data_size);
  const double full = bits_per_sample == 16 ? 32767.0 : 8388607.0;
  for (float s : clip.samples) {
    const auto v = static_cast<std::int32_t>(std::lround(std::clamp(static_cast<double>(s), -1.0, 1.0) * full));
    for (std::uint32_t b = 0; b < width; ++b) out.put(static_cast<char>((v >> (8 * b)) & 0xff));
  }
  if (!out) throw IoError("failed writing WAV file " + path.string());
}

}  // namespace tcsk
