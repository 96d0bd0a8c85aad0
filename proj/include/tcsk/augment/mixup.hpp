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

#include <optional>

#include "tcsk/features/mfcc.hpp"
#include "tcsk/numerics/rng.hpp"

namespace tcsk {

/// A feature map with its target distribution over classes.
struct LabeledFeatures {
  FeatureMap features;
  Eigen::VectorXd target;
};

/// Probability vector with all mass on `label`.
Eigen::VectorXd one_hot(Index label, Index n_classes);

struct MixupConfig {
  double alpha = 0.2;
  /// Use this weight instead of drawing from Beta(alpha, alpha).
  std::optional<double> forced_lambda;

  void validate() const;
};

/// lambda * a + (1 - lambda) * b for features and targets. Shapes must agree.
LabeledFeatures mix(const LabeledFeatures& a, const LabeledFeatures& b, double lambda);

/// Draws lambda (or takes the forced value) and mixes.
LabeledFeatures mixup(const LabeledFeatures& a, const LabeledFeatures& b, const MixupConfig& cfg,
                      Rng& rng, double* lambda = nullptr);

}  // namespace tcsk
