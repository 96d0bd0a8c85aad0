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

struct GridMaskConfig {
  /// Probability of masking a given example.
  double p = 0.6;
  /// Masked fraction of every grid tile, (a1 * a2) / (d1 * d2).
  double mr = 0.3;
  /// Inclusive range of the grid period, in cells, shared by both axes.
  Index d_min = 8;
  Index d_max = 40;

  void validate() const;
};

/// One realized grid: rows f with (f - offset_f) mod d_f < a_f and frames t with
/// (t - offset_t) mod d_t < a_t are zeroed where both hold.
struct GridMaskPlan {
  bool applied = false;
  Index d_f = 0, d_t = 0;
  Index a_f = 0, a_t = 0;
  Index offset_f = 0, offset_t = 0;
  /// The period range had to be shrunk to fit the feature extent.
  bool clamped = false;

  bool masked(Index f, Index t) const;
};

/// True when d_max exceeds either extent, so periods are clamped to the extent.
bool grid_mask_clamps(Index bins, Index frames, const GridMaskConfig& cfg);

/// Draws the Bernoulli(p) decision, then periods, edges and offsets.
GridMaskPlan draw_grid_mask(Index bins, Index frames, const GridMaskConfig& cfg, Rng& rng);

/// Zeroes masked cells; every other cell is copied bit for bit.
FeatureMap apply_grid_mask(const FeatureMap& fm, const GridMaskPlan& plan);

FeatureMap grid_mask(const FeatureMap& fm, const GridMaskConfig& cfg, Rng& rng,
                     GridMaskPlan* plan = nullptr);

/// 1 where the plan masks a cell, 0 elsewhere; [bins, frames].
Eigen::MatrixXf grid_mask_pattern(Index bins, Index frames, const GridMaskPlan& plan);

}  // namespace tcsk
