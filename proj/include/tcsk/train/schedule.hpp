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

#include <cstdint>

#include "tcsk/augment/compose.hpp"
#include "tcsk/numerics/tensor.hpp"

namespace tcsk {

enum class WeightDecayMode { decoupled, l2 };

struct TrainConfig {
  double lr0 = 0.001;
  double weight_decay = 0.0005;
  WeightDecayMode weight_decay_mode = WeightDecayMode::decoupled;
  double decay_factor = 0.98;
  Index decay_interval = 5;
  Index batch_size = 16;
  Index epochs = 100;
  std::uint64_t seed = 0;
  AugmentConfig augmentation;
  /// Record wall-clock seconds per epoch in the report; zero otherwise.
  bool timing = false;

  void validate() const;
};

/// lr0 * decay_factor^floor(epoch / decay_interval).
double lr_at(Index epoch, const TrainConfig& cfg);

}  // namespace tcsk
