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

#include "tcsk/augment/grid_mask.hpp"

#include <algorithm>
#include <cmath>

#include "tcsk/util/error.hpp"

namespace tcsk {
namespace {

struct AxisGrid {
  Index period;
  Index edge;
  Index offset;
};

AxisGrid draw_axis(Index extent, const GridMaskConfig& cfg, Rng& rng) {
  const Index hi = std::min(cfg.d_max, extent);
  const Index lo = std::min(cfg.d_min, hi);
  AxisGrid g;
  g.period = rng.uniform_int(lo, hi);
  g.edge = static_cast<Index>(std::lround(static_cast<double>(g.period) * std::sqrt(cfg.mr)));
  g.offset = rng.uniform_int(0, g.period - 1);
  return g;
}

Index wrap(Index x, Index d) {
  const Index r = x % d;
  return r < 0 ? r + d : r;
}

}  // namespace

void GridMaskConfig::validate() const {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("gridmask: p must lie in [0, 1]");
  if (!(mr > 0.0 && mr < 1.0)) throw ConfigError("gridmask: mr must lie in (0, 1)");
  if (d_min < 2 || d_max < d_min) {
    throw ConfigError("gridmask: d range [" + std::to_string(d_min) + ", " +
                      std::to_string(d_max) + "] must satisfy 2 <= min <= max");
  }
}

bool GridMaskPlan::masked(Index f, Index t) const {
  return applied && wrap(f - offset_f, d_f) < a_f && wrap(t - offset_t, d_t) < a_t;
}

bool grid_mask_clamps(Index bins, Index frames, const GridMaskConfig& cfg) {
  return cfg.d_max > bins || cfg.d_max > frames;
}

GridMaskPlan draw_grid_mask(Index bins, Index frames, const GridMaskConfig& cfg, Rng& rng) {
  cfg.validate();
  if (bins < 1 || frames < 1) throw DimensionError("gridmask: empty feature map");
  GridMaskPlan plan;
  plan.clamped = grid_mask_clamps(bins, frames, cfg);
  if (rng.uniform() >= cfg.p) return plan;
  const AxisGrid f = draw_axis(bins, cfg, rng);
  const AxisGrid t = draw_axis(frames, cfg, rng);
  plan.applied = true;
  plan.d_f = f.period;
  plan.a_f = f.edge;
  plan.offset_f = f.offset;
  plan.d_t = t.period;
  plan.a_t = t.edge;
  plan.offset_t = t.offset;
  return plan;
}

FeatureMap apply_grid_mask(const FeatureMap& fm, const GridMaskPlan& plan) {
  if (!plan.applied) return fm;
  FeatureMap out = fm;
  auto m = out.coeffs.matrix();
  for (Index f = 0; f < m.rows(); ++f) {
    if (wrap(f - plan.offset_f, plan.d_f) >= plan.a_f) continue;
    for (Index t = 0; t < m.cols(); ++t) {
      if (wrap(t - plan.offset_t, plan.d_t) < plan.a_t) m(f, t) = 0.0f;
    }
  }
  return out;
}

FeatureMap grid_mask(const FeatureMap& fm, const GridMaskConfig& cfg, Rng& rng,
                     GridMaskPlan* plan) {
  const GridMaskPlan drawn = draw_grid_mask(fm.bins(), fm.frames(), cfg, rng);
  if (plan) *plan = drawn;
  return apply_grid_mask(fm, drawn);
}

Eigen::MatrixXf grid_mask_pattern(Index bins, Index frames, const GridMaskPlan& plan) {
  Eigen::MatrixXf pattern = Eigen::MatrixXf::Zero(bins, frames);
  for (Index f = 0; f < bins; ++f) {
    for (Index t = 0; t < frames; ++t) pattern(f, t) = plan.masked(f, t) ? 1.0f : 0.0f;
  }
  return pattern;
}

}  // namespace tcsk
