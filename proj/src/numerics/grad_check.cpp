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

#include "tcsk/numerics/grad_check.hpp"

#include <algorithm>
#include <cmath>

#include "tcsk/numerics/rng.hpp"

namespace tcsk {
namespace {

Vector<double> projection(Index size) {
  Rng rng(0x9a3dULL);
  Vector<double> w(size);
  for (Index i = 0; i < size; ++i) w[i] = rng.uniform(0.5, 1.5) * (rng.uniform() < 0.5 ? -1 : 1);
  return w;
}

double evaluate(const GradCheckFn& fn, const std::vector<Tensor<double>>& inputs,
                const Vector<double>& w) {
  Graph<double> g;
  std::vector<Var<double>> vars;
  for (const auto& t : inputs) vars.push_back(g.constant(t));
  const Var<double> out = fn(g, vars);
  return w.dot(out.value().data());
}

}  // namespace

GradCheckReport grad_check(const GradCheckFn& fn, const std::vector<Tensor<double>>& inputs,
                           double h, double abs_floor) {
  Graph<double> g;
  std::vector<Var<double>> vars;
  for (const auto& t : inputs) vars.push_back(g.variable(t));
  const Var<double> out = fn(g, vars);
  const Vector<double> w = projection(out.value().size());
  g.backward(out, w);

  GradCheckReport report;
  std::vector<Tensor<double>> probe = inputs;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const auto& analytic = g.grad(vars[i]);
    for (Index j = 0; j < inputs[i].size(); ++j) {
      const double a = analytic.size() ? analytic[j] : 0.0;
      const double x0 = probe[i][j];
      probe[i][j] = x0 + h;
      const double fp = evaluate(fn, probe, w);
      probe[i][j] = x0 - h;
      const double fm = evaluate(fn, probe, w);
      probe[i][j] = x0;
      const double n = (fp - fm) / (2.0 * h);
      const double denom = std::max({std::abs(a), std::abs(n), abs_floor});
      const double rel = std::abs(a - n) / denom;
      if (rel > report.max_rel_error || !std::isfinite(rel)) {
        report = {std::isfinite(rel) ? rel : INFINITY, i, j, a, n};
      }
    }
  }
  return report;
}

}  // namespace tcsk
