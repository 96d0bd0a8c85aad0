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

#include <Eigen/Core>

#include "tcsk/data/dataset.hpp"
#include "tcsk/model/tcsknet.hpp"

namespace tcsk {

using ConfusionMatrix = Eigen::Matrix<Index, Eigen::Dynamic, Eigen::Dynamic>;

struct EvalResult {
  double accuracy = 0.0;
  /// Row = true class, column = predicted class.
  ConfusionMatrix confusion;
  std::vector<Index> predictions;
};

/// Index of the largest logit; the first one wins ties.
Index argmax(const Tensor<float>& logits);

/// Confusion matrix and accuracy from label/prediction pairs.
EvalResult score_predictions(std::span<const Index> labels, std::span<const Index> predictions,
                             Index n_classes);

/// Eval-mode classification of each example at full length, one at a time.
EvalResult evaluate(TcskNet<float>& net, const std::vector<Example>& split);

}  // namespace tcsk
