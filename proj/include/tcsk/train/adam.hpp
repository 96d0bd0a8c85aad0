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
#include <utility>
#include <vector>

#include "tcsk/numerics/tensor.hpp"
#include "tcsk/train/schedule.hpp"

namespace tcsk {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.0;
  WeightDecayMode weight_decay_mode = WeightDecayMode::decoupled;

  void validate() const;
};

/// Adam over a fixed list of named parameters. Gradients are read from each
/// tensor's grad(); a missing gradient counts as zero.
class Adam {
 public:
  using NamedParams = std::vector<std::pair<std::string, Tensor<float>*>>;

  Adam(NamedParams params, AdamConfig cfg = {});

  /// One update at learning rate `lr`. Throws NumericError naming the first
  /// parameter whose gradient is not finite; no parameter is modified then.
  void step(double lr);

  Index step_count() const { return step_; }
  const AdamConfig& config() const { return cfg_; }
  /// Number of scalars updated per step.
  Index scalar_count() const;
  const Vector<float>& first_moment(std::size_t i) const { return m_.at(i); }
  const Vector<float>& second_moment(std::size_t i) const { return v_.at(i); }

 private:
  NamedParams params_;
  AdamConfig cfg_;
  std::vector<Vector<float>> m_;
  std::vector<Vector<float>> v_;
  Index step_ = 0;
};

}  // namespace tcsk
