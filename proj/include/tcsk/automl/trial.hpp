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
#include <string>
#include <string_view>

#include "tcsk/automl/search_space.hpp"
#include "tcsk/numerics/tensor.hpp"

namespace tcsk {

enum class TrialStatus { pending, complete, failed };

std::string to_string(TrialStatus status);
TrialStatus parse_trial_status(std::string_view name);

struct Trial {
  Index trial_id = 0;
  std::uint64_t seed = 0;
  ParamConfig config;
  /// Validation accuracy, higher is better. NaN unless complete.
  double objective = 0.0;
  TrialStatus status = TrialStatus::pending;
  double wall_time_s = 0.0;

  friend bool operator==(const Trial&, const Trial&) = default;
};

}  // namespace tcsk
