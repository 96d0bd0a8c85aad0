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

#include "tcsk/augment/spec_mask.hpp"

#include "tcsk/util/error.hpp"

namespace tcsk {

void SpecMaskConfig::validate() const {
  if (n_time_masks < 0 || n_freq_masks < 0 || max_time_width < 0 || max_freq_width < 0) {
    throw ConfigError("specmask: mask counts and widths must be non-negative");
  }
}

FeatureMap spec_mask(const FeatureMap& fm, const SpecMaskConfig& cfg, Rng& rng) {
  cfg.validate();
  const Index bins = fm.bins();
  const Index frames = fm.frames();
  if (cfg.max_time_width > frames || cfg.max_freq_width > bins) {
    throw DimensionError("specmask: widths (" + std::to_string(cfg.max_time_width) + " frames, " +
                         std::to_string(cfg.max_freq_width) + " bins) exceed the " +
                         shape_string(fm.coeffs.shape()) + " feature map");
  }
  FeatureMap out = fm;
  auto m = out.coeffs.matrix();
  for (Index i = 0; i < cfg.n_time_masks; ++i) {
    const Index w = rng.uniform_int(0, cfg.max_time_width);
    const Index start = rng.uniform_int(0, frames - w);
    m.middleCols(start, w).setZero();
  }
  for (Index i = 0; i < cfg.n_freq_masks; ++i) {
    const Index w = rng.uniform_int(0, cfg.max_freq_width);
    const Index start = rng.uniform_int(0, bins - w);
    m.middleRows(start, w).setZero();
  }
  return out;
}

}  // namespace tcsk
