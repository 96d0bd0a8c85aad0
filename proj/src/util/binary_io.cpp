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

#include "tcsk/util/binary_io.hpp"

#include <array>
#include <bit>
#include <cstring>

#include "tcsk/util/error.hpp"

namespace tcsk::binary {
namespace {

template <typename U>
void write_le(std::ostream& os, U v) {
  std::array<char, sizeof(U)> bytes;
  for (std::size_t i = 0; i < sizeof(U); ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(bytes.data(), bytes.size());
}

template <typename U>
U read_le(std::istream& is, std::string_view what) {
  std::array<unsigned char, sizeof(U)> bytes;
  is.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (is.gcount() != static_cast<std::streamsize>(bytes.size())) {
    throw FormatError("truncated file while reading " + std::string(what));
  }
  U v = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(bytes[i]) << (8 * i);
  return v;
}

}  // namespace

void write_u32(std::ostream& os, std::uint32_t v) { write_le(os, v); }
void write_u64(std::ostream& os, std::uint64_t v) { write_le(os, v); }
void write_f32(std::ostream& os, float v) { write_le(os, std::bit_cast<std::uint32_t>(v)); }
void write_f64(std::ostream& os, double v) { write_le(os, std::bit_cast<std::uint64_t>(v)); }

void write_magic(std::ostream& os, std::string_view magic) {
  os.write(magic.data(), static_cast<std::streamsize>(magic.size()));
}

void write_string(std::ostream& os, std::string_view s) {
  write_u32(os, static_cast<std::uint32_t>(s.size()));
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::uint32_t read_u32(std::istream& is, std::string_view what) {
  return read_le<std::uint32_t>(is, what);
}
std::uint64_t read_u64(std::istream& is, std::string_view what) {
  return read_le<std::uint64_t>(is, what);
}
float read_f32(std::istream& is, std::string_view what) {
  return std::bit_cast<float>(read_le<std::uint32_t>(is, what));
}
double read_f64(std::istream& is, std::string_view what) {
  return std::bit_cast<double>(read_le<std::uint64_t>(is, what));
}

void expect_magic(std::istream& is, std::string_view magic, std::string_view what) {
  std::string got(magic.size(), '\0');
  is.read(got.data(), static_cast<std::streamsize>(got.size()));
  if (is.gcount() != static_cast<std::streamsize>(got.size())) {
    throw FormatError("truncated file while reading " + std::string(what) + " magic");
  }
  if (got != magic) {
    throw FormatError("bad " + std::string(what) + " magic: expected '" + std::string(magic) +
                      "'");
  }
}

std::string read_string(std::istream& is, std::string_view what) {
  const std::uint32_t n = read_u32(is, what);
  if (n > (1u << 20)) throw FormatError("implausible string length in " + std::string(what));
  std::string s(n, '\0');
  is.read(s.data(), n);
  if (is.gcount() != static_cast<std::streamsize>(n)) {
    throw FormatError("truncated file while reading " + std::string(what));
  }
  return s;
}

}  // namespace tcsk::binary
