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

#include <string>
#include <string_view>
#include <vector>

#include "tcsk/augment/grid_mask.hpp"
#include "tcsk/augment/mixup.hpp"
#include "tcsk/augment/spec_mask.hpp"

namespace tcsk {

enum class AugmentPolicy {
  none,
  gridmask,
  mixup,
  specmask,
  /// Mask both source examples independently, then mix.
  gridmask_then_mixup,
  /// Mix first, then mask the mixture.
  mixup_then_gridmask,
};

std::string to_string(AugmentPolicy policy);
/// Throws ConfigError listing the accepted names.
AugmentPolicy parse_augment_policy(std::string_view name);
bool uses_mixup(AugmentPolicy policy);

struct AugmentConfig {
  AugmentPolicy policy = AugmentPolicy::none;
  GridMaskConfig gridmask;
  MixupConfig mixup;
  SpecMaskConfig specmask;
};

/// Applies the policy to a batch. Mixup partners come from a random permutation of
/// the batch and pairs are cropped to the shorter length. Requires two or more
/// examples whenever mixup is involved.
std::vector<LabeledFeatures> compose(const std::vector<LabeledFeatures>& batch,
                                     const AugmentConfig& cfg, Rng& rng);

}  // namespace tcsk
