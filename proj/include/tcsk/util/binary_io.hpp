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

#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

namespace tcsk::binary {

// Little-endian primitives. Readers throw FormatError naming `what` on EOF.

void write_u32(std::ostream& os, std::uint32_t v);
void write_u64(std::ostream& os, std::uint64_t v);
void write_f32(std::ostream& os, float v);
void write_f64(std::ostream& os, double v);
void write_magic(std::ostream& os, std::string_view magic);
/// u32 length followed by raw bytes.
void write_string(std::ostream& os, std::string_view s);

std::uint32_t read_u32(std::istream& is, std::string_view what);
std::uint64_t read_u64(std::istream& is, std::string_view what);
float read_f32(std::istream& is, std::string_view what);
double read_f64(std::istream& is, std::string_view what);
/// Throws FormatError if the next bytes differ from `magic`.
void expect_magic(std::istream& is, std::string_view magic, std::string_view what);
std::string read_string(std::istream& is, std::string_view what);

}  // namespace tcsk::binary
