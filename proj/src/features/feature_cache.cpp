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

#include "tcsk/features/feature_cache.hpp"

#include <fstream>

#include "tcsk/numerics/serialize.hpp"
#include "tcsk/util/binary_io.hpp"
#include "tcsk/util/error.hpp"

namespace tcsk {

void write_feature_cache(const std::filesystem::path& path, const FeatureMap& fm, int sample_rate) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot create feature cache " + path.string());
  binary::write_magic(out, "TSKF");
  binary::write_u32(out, static_cast<std::uint32_t>(sample_rate));
  binary::write_u32(out, static_cast<std::uint32_t>(fm.frame_hop));
  binary::write_u32(out, static_cast<std::uint32_t>(fm.frame_len));
  write_tensor(out, fm.coeffs);
  if (!out) throw IoError("failed writing feature cache " + path.string());
}

CachedFeatures read_feature_cache(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open feature cache " + path.string());
  try {
    binary::expect_magic(in, "TSKF", "feature cache");
    CachedFeatures c;
    c.sample_rate = static_cast<int>(binary::read_u32(in, "sample rate"));
    c.features.frame_hop = binary::read_u32(in, "hop");
    c.features.frame_len = binary::read_u32(in, "n_fft");
    c.features.coeffs = read_tensor(in);
    if (c.features.coeffs.rank() != 2) throw FormatError("feature tensor must be rank 2");
    return c;
  } catch (const FormatError& e) {
    throw FormatError(std::string(e.what()) + " in " + path.string());
  }
}

}  // namespace tcsk
