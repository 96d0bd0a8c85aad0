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

#include <span>

#include "tcsk/automl/trial.hpp"

namespace tcsk {

struct TpeConfig {
  /// Fraction of complete trials that form the "good" density l(x).
  double gamma = 0.25;
  /// Complete trials required before densities replace the prior.
  Index n_startup = 10;
  /// Draws from l(x) scored per suggestion.
  Index n_candidates = 24;
  /// Minimum kernel bandwidth as a fraction of a uniform parameter's range. The
  /// bandwidth of an n-point density is also never below range / (1 + n).
  double bandwidth_floor = 0.01;
  /// Weight, in observations, of the uniform prior mixed into each uniform density.
  double prior_weight = 1.0;

  void validate() const;
};

/// Tree-structured Parzen estimator suggestion. Only complete trials count.
/// Trials are stably sorted by objective (descending); the first ceil(gamma * n)
/// are good, so ties resolve by history order. Uniform parameters use a Gaussian
/// kernel density truncated to [low, high] with bandwidth std * n^(-1/5), mixed
/// with the uniform prior; choices use counts plus one per member. The candidate
/// drawn from l with the largest log l - log g wins.
ParamConfig tpe_suggest(std::span<const Trial> history, const SearchSpace& space,
                        const TpeConfig& cfg, Rng& rng);

}  // namespace tcsk
