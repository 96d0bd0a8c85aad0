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

#include "tcsk/augment/compose.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <utility>

#include "tcsk/util/error.hpp"

namespace tcsk {
namespace {

constexpr std::array<std::pair<AugmentPolicy, std::string_view>, 6> kNames{{
    {AugmentPolicy::none, "none"},
    {AugmentPolicy::gridmask, "gridmask"},
    {AugmentPolicy::mixup, "mixup"},
    {AugmentPolicy::specmask, "specmask"},
    {AugmentPolicy::gridmask_then_mixup, "gridmask_then_mixup"},
    {AugmentPolicy::mixup_then_gridmask, "mixup_then_gridmask"},
}};

std::vector<LabeledFeatures> mask_all(std::vector<LabeledFeatures> batch,
                                      const GridMaskConfig& cfg, Rng& rng) {
  for (auto& ex : batch) ex.features = grid_mask(ex.features, cfg, rng);
  return batch;
}

std::vector<LabeledFeatures> mix_all(const std::vector<LabeledFeatures>& batch,
                                     const MixupConfig& cfg, Rng& rng) {
  std::vector<std::size_t> partner(batch.size());
  std::iota(partner.begin(), partner.end(), std::size_t{0});
  for (std::size_t i = partner.size(); i > 1; --i) {
    std::swap(partner[i - 1], partner[static_cast<std::size_t>(rng.uniform_int(0, i - 1))]);
  }
  std::vector<LabeledFeatures> out;
  out.reserve(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    LabeledFeatures a = batch[i];
    LabeledFeatures b = batch[partner[i]];
    const Index frames = std::min(a.features.frames(), b.features.frames());
    a.features = crop_frames(a.features, frames);
    b.features = crop_frames(b.features, frames);
    out.push_back(mixup(a, b, cfg, rng));
  }
  return out;
}

}  // namespace

std::string to_string(AugmentPolicy policy) {
  for (const auto& [p, name] : kNames) {
    if (p == policy) return std::string(name);
  }
  return "unknown";
}

AugmentPolicy parse_augment_policy(std::string_view name) {
  std::string accepted;
  for (const auto& [p, n] : kNames) {
    if (n == name) return p;
    accepted += (accepted.empty() ? "" : ", ") + std::string(n);
  }
  throw ConfigError("unknown augmentation policy '" + std::string(name) + "' (expected one of " +
                    accepted + ")");
}

bool uses_mixup(AugmentPolicy policy) {
  return policy == AugmentPolicy::mixup || policy == AugmentPolicy::gridmask_then_mixup ||
         policy == AugmentPolicy::mixup_then_gridmask;
}

std::vector<LabeledFeatures> compose(const std::vector<LabeledFeatures>& batch,
                                     const AugmentConfig& cfg, Rng& rng) {
  if (uses_mixup(cfg.policy) && batch.size() < 2) {
    throw ConfigError("augmentation '" + to_string(cfg.policy) +
                      "' mixes examples and needs a batch of at least 2, got " +
                      std::to_string(batch.size()));
  }
  switch (cfg.policy) {
    case AugmentPolicy::none:
      return batch;
    case AugmentPolicy::gridmask:
      return mask_all(batch, cfg.gridmask, rng);
    case AugmentPolicy::mixup:
      return mix_all(batch, cfg.mixup, rng);
    case AugmentPolicy::specmask: {
      std::vector<LabeledFeatures> out = batch;
      for (auto& ex : out) ex.features = spec_mask(ex.features, cfg.specmask, rng);
      return out;
    }
    case AugmentPolicy::gridmask_then_mixup:
      return mix_all(mask_all(batch, cfg.gridmask, rng), cfg.mixup, rng);
    case AugmentPolicy::mixup_then_gridmask:
      return mask_all(mix_all(batch, cfg.mixup, rng), cfg.gridmask, rng);
  }
  throw ConfigError("unhandled augmentation policy");
}

}  // namespace tcsk
