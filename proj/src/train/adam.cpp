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

#include "tcsk/train/adam.hpp"

#include <cmath>

#include "tcsk/util/error.hpp"

namespace tcsk {

void AdamConfig::validate() const {
  if (!(beta1 >= 0.0 && beta1 < 1.0)) throw ConfigError("adam: beta1 must be in [0, 1)");
  if (!(beta2 >= 0.0 && beta2 < 1.0)) throw ConfigError("adam: beta2 must be in [0, 1)");
  if (!(eps > 0.0)) throw ConfigError("adam: eps must be > 0");
  if (!(weight_decay >= 0.0)) throw ConfigError("adam: weight_decay must be >= 0");
}

Adam::Adam(NamedParams params, AdamConfig cfg) : params_(std::move(params)), cfg_(cfg) {
  cfg_.validate();
  for (const auto& [name, p] : params_) {
    if (p == nullptr) throw Error("adam: null parameter " + name);
    m_.push_back(Vector<float>::Zero(p->size()));
    v_.push_back(Vector<float>::Zero(p->size()));
  }
}

Index Adam::scalar_count() const {
  Index n = 0;
  for (const auto& entry : params_) n += entry.second->size();
  return n;
}

void Adam::step(double lr) {
  if (!(lr > 0.0)) throw ConfigError("adam: learning rate must be > 0");
  for (const auto& [name, p] : params_) {
    const auto& g = p->grad();
    if (!g) continue;
    if (g->size() != p->size())
      throw DimensionError("adam: gradient size mismatch for " + name);
    if (!g->allFinite()) throw NumericError("adam: non-finite gradient in " + name);
  }

  ++step_;
  const double b1 = cfg_.beta1;
  const double b2 = cfg_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(step_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(step_));
  const bool l2 = cfg_.weight_decay_mode == WeightDecayMode::l2;
  const auto decay = static_cast<float>(l2 ? 0.0 : lr * cfg_.weight_decay);

  for (std::size_t i = 0; i < params_.size(); ++i) {
    Tensor<float>& p = *params_[i].second;
    auto w = p.data().array();
    auto m = m_[i].array();
    auto v = v_[i].array();
    Eigen::ArrayXf g = p.grad() ? Eigen::ArrayXf(p.grad()->array())
                                : Eigen::ArrayXf::Zero(p.size());
    if (l2) g += static_cast<float>(cfg_.weight_decay) * w;
    m = static_cast<float>(b1) * m + static_cast<float>(1.0 - b1) * g;
    v = static_cast<float>(b2) * v + static_cast<float>(1.0 - b2) * g.square();
    const Eigen::ArrayXf m_hat = m / static_cast<float>(c1);
    const Eigen::ArrayXf v_hat = v / static_cast<float>(c2);
    w = w - decay * w -
        static_cast<float>(lr) * m_hat / (v_hat.sqrt() + static_cast<float>(cfg_.eps));
  }
}

}  // namespace tcsk
