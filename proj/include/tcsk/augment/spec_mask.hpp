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

#include "tcsk/features/mfcc.hpp"
#include "tcsk/numerics/rng.hpp"

namespace tcsk {

/// Time and frequency band masking.
struct SpecMaskConfig {
  Index n_time_masks = 2;
  Index max_time_width = 40;
  Index n_freq_masks = 2;
  Index max_freq_width = 8;

  void validate() const;
};

/// Each mask zeroes a contiguous band of uniform width in [0, max] at a uniform position.
/// Throws DimensionError if a maximum width exceeds the matching extent.
FeatureMap spec_mask(const FeatureMap& fm, const SpecMaskConfig& cfg, Rng& rng);

}  // namespace tcsk
