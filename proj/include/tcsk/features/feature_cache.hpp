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

#include <filesystem>

#include "tcsk/features/mfcc.hpp"

namespace tcsk {

// Cache file layout: "TSKF", u32 sample_rate, u32 hop, u32 n_fft, then the
// coefficient tensor in the TNSR format.

void write_feature_cache(const std::filesystem::path& path, const FeatureMap& fm, int sample_rate);

struct CachedFeatures {
  FeatureMap features;
  int sample_rate = 0;
};

CachedFeatures read_feature_cache(const std::filesystem::path& path);

}  // namespace tcsk
