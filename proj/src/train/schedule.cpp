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

#include "tcsk/train/schedule.hpp"

#include <cmath>

#include "tcsk/util/error.hpp"

namespace tcsk {

void TrainConfig::validate() const {
  if (!(lr0 > 0.0) || !std::isfinite(lr0)) throw ConfigError("train.lr0 must be > 0");
  if (!(weight_decay >= 0.0)) throw ConfigError("train.weight_decay must be >= 0");
  if (!(decay_factor > 0.0 && decay_factor <= 1.0))
    throw ConfigError("train.decay_factor must be in (0, 1]");
  if (decay_interval < 1) throw ConfigError("train.decay_interval must be >= 1");
  if (batch_size < 1) throw ConfigError("train.batch_size must be >= 1");
  if (epochs < 1) throw ConfigError("train.epochs must be >= 1");
  augmentation.gridmask.validate();
  augmentation.mixup.validate();
}

double lr_at(Index epoch, const TrainConfig& cfg) {
  if (epoch < 0) throw ConfigError("lr_at: epoch must be >= 0");
  const Index k = epoch / cfg.decay_interval;
  return cfg.lr0 * std::pow(cfg.decay_factor, static_cast<double>(k));
}

}  // namespace tcsk
