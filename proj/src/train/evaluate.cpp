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

#include "tcsk/train/evaluate.hpp"

#include "tcsk/util/error.hpp"

namespace tcsk {

Index argmax(const Tensor<float>& logits) {
  if (logits.size() == 0) throw DimensionError("argmax: empty logits");
  Index best = 0;
  for (Index i = 1; i < logits.size(); ++i)
    if (logits[i] > logits[best]) best = i;
  return best;
}

EvalResult score_predictions(std::span<const Index> labels, std::span<const Index> predictions,
                             Index n_classes) {
  if (labels.size() != predictions.size())
    throw DimensionError("score_predictions: label and prediction counts differ");
  if (labels.empty()) throw ConfigError("score_predictions: empty split");
  EvalResult r;
  r.confusion = ConfusionMatrix::Zero(n_classes, n_classes);
  Index correct = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const Index y = labels[i];
    const Index p = predictions[i];
    if (y < 0 || y >= n_classes || p < 0 || p >= n_classes)
      throw DimensionError("score_predictions: class index out of range");
    ++r.confusion(y, p);
    if (y == p) ++correct;
  }
  r.predictions.assign(predictions.begin(), predictions.end());
  r.accuracy = static_cast<double>(correct) / static_cast<double>(labels.size());
  return r;
}

EvalResult evaluate(TcskNet<float>& net, const std::vector<Example>& split) {
  std::vector<Index> labels;
  std::vector<Index> predictions;
  for (const auto& e : split) {
    labels.push_back(e.label);
    predictions.push_back(argmax(net.predict(e.features)));
  }
  return score_predictions(labels, predictions, net.config().n_classes);
}

}  // namespace tcsk
