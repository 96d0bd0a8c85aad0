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

#include <functional>
#include <span>
#include <vector>

#include "tcsk/numerics/graph.hpp"

namespace tcsk {

/// Builds the function under test on a fresh graph from variables bound to the inputs.
/// Must be deterministic: it is re-run for every finite-difference probe.
using GradCheckFn = std::function<Var<double>(Graph<double>&, std::span<const Var<double>>)>;

struct GradCheckReport {
  double max_rel_error = 0.0;
  std::size_t worst_input = 0;
  Index worst_element = 0;
  double analytic = 0.0;
  double numeric = 0.0;
};

/// Compares reverse-mode gradients of <w, fn(inputs)> against central differences
/// (f(x+h) - f(x-h)) / 2h for every input element. `w` is a fixed pseudo-random
/// projection so non-scalar outputs are fully exercised. Relative error uses
/// max(|analytic|, |numeric|, abs_floor) as denominator.
GradCheckReport grad_check(const GradCheckFn& fn, const std::vector<Tensor<double>>& inputs,
                           double h = 1e-5, double abs_floor = 1e-4);

}  // namespace tcsk
