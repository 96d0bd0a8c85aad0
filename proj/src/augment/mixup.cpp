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

#include "tcsk/augment/mixup.hpp"

#include <cmath>

#include "tcsk/util/error.hpp"

namespace tcsk {
namespace {

constexpr double kTargetSumTolerance = 1e-6;

void check_target(const Eigen::VectorXd& t, const char* which) {
  if ((t.array() < 0.0).any() || std::abs(t.sum() - 1.0) > kTargetSumTolerance) {
    throw ConfigError(std::string("mixup: target ") + which + " is not a probability vector");
  }
}

}  // namespace

Eigen::VectorXd one_hot(Index label, Index n_classes) {
  if (label < 0 || label >= n_classes) {
    throw DimensionError("one_hot: label " + std::to_string(label) + " outside [0, " +
                         std::to_string(n_classes) + ")");
  }
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n_classes);
  v[label] = 1.0;
  return v;
}

void MixupConfig::validate() const {
  if (!(alpha > 0.0)) throw ConfigError("mixup: alpha must be positive");
  if (forced_lambda && !(*forced_lambda >= 0.0 && *forced_lambda <= 1.0)) {
    throw ConfigError("mixup: forced lambda must lie in [0, 1]");
  }
}

LabeledFeatures mix(const LabeledFeatures& a, const LabeledFeatures& b, double lambda) {
  if (a.features.coeffs.shape() != b.features.coeffs.shape()) {
    throw DimensionError("mixup: feature shapes " + shape_string(a.features.coeffs.shape()) +
                         " and " + shape_string(b.features.coeffs.shape()) + " differ");
  }
  if (a.target.size() != b.target.size()) {
    throw DimensionError("mixup: targets have " + std::to_string(a.target.size()) + " and " +
                         std::to_string(b.target.size()) + " classes");
  }
  check_target(a.target, "a");
  check_target(b.target, "b");
  LabeledFeatures out = a;
  if (lambda == 1.0) return out;
  const float l = static_cast<float>(lambda);
  out.features.coeffs.data() = l * a.features.coeffs.data() + (1.0f - l) * b.features.coeffs.data();
  out.target = lambda * a.target + (1.0 - lambda) * b.target;
  return out;
}

LabeledFeatures mixup(const LabeledFeatures& a, const LabeledFeatures& b, const MixupConfig& cfg,
                      Rng& rng, double* lambda) {
  cfg.validate();
  const double l = cfg.forced_lambda ? *cfg.forced_lambda : rng.beta(cfg.alpha, cfg.alpha);
  if (lambda) *lambda = l;
  return mix(a, b, l);
}

}  // namespace tcsk
