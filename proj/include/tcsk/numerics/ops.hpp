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

#include <vector>

#include "tcsk/numerics/graph.hpp"
#include "tcsk/numerics/rng.hpp"

namespace tcsk {

enum class Mode { train, eval };

/// How out-of-range time steps are filled by the convolutions.
enum class PadMode {
  zeros,
  /// Repeat the first/last frame; a time-constant input stays constant.
  replicate,
};

/// Running statistics of a batch-norm layer. Empty until initialized.
template <typename Scalar>
struct BatchNormStats {
  Vector<Scalar> mean;
  Vector<Scalar> var;

  bool initialized() const { return mean.size() > 0; }
  /// Zero mean, unit variance for `channels` channels.
  static BatchNormStats fresh(Index channels) {
    return {Vector<Scalar>::Zero(channels), Vector<Scalar>::Ones(channels)};
  }
};

inline constexpr double kBatchNormMomentum = 0.1;
inline constexpr double kBatchNormEps = 1e-5;

// All sequence ops accept a single example [C, T] or a batch [N, C, T] and
// keep the rank of their input.

/// 1-D convolution along the last axis. weight [Cout, Cin, K], bias [Cout].
template <typename Scalar>
Var<Scalar> conv1d(Var<Scalar> input, Var<Scalar> weight, Var<Scalar> bias, Index stride = 1,
                   Index padding = 0, PadMode pad_mode = PadMode::zeros);

/// Per-channel convolution. weight [C, 1, K], bias [C].
template <typename Scalar>
Var<Scalar> depthwise_conv1d(Var<Scalar> input, Var<Scalar> weight, Var<Scalar> bias,
                             Index stride = 1, Index padding = 0,
                             PadMode pad_mode = PadMode::zeros);

/// Normalizes each channel over (batch, time). Train mode uses batch statistics
/// and folds them into `stats`; eval mode reads `stats`.
template <typename Scalar>
Var<Scalar> batchnorm1d(Var<Scalar> input, Var<Scalar> gamma, Var<Scalar> beta,
                        BatchNormStats<Scalar>& stats, Mode mode,
                        double momentum = kBatchNormMomentum, double eps = kBatchNormEps);

template <typename Scalar>
Var<Scalar> relu(Var<Scalar> x);

/// Softmax along `axis` (negative counts from the end).
template <typename Scalar>
Var<Scalar> softmax(Var<Scalar> x, Index axis = -1);

/// Mean over the last axis: [.., C, T] -> [.., C].
template <typename Scalar>
Var<Scalar> global_average_pool(Var<Scalar> x);

/// x [in] or [N, in]; weight [out, in]; bias [out].
template <typename Scalar>
Var<Scalar> linear(Var<Scalar> x, Var<Scalar> weight, Var<Scalar> bias);

template <typename Scalar>
Var<Scalar> avg_pool1d(Var<Scalar> x, Index kernel, Index stride);

/// Ties resolve to the first maximal element.
template <typename Scalar>
Var<Scalar> max_pool1d(Var<Scalar> x, Index kernel, Index stride);

/// Inverted dropout. Eval mode (or p == 0) returns `x` itself.
template <typename Scalar>
Var<Scalar> dropout(Var<Scalar> x, double p, Mode mode, Rng& rng);

template <typename Scalar>
Var<Scalar> add(Var<Scalar> a, Var<Scalar> b);

template <typename Scalar>
Var<Scalar> scalar_mul(Var<Scalar> x, Scalar factor);

/// Stacks equally shaped values along a new leading axis.
template <typename Scalar>
Var<Scalar> stack(const std::vector<Var<Scalar>>& parts);

/// Slice `index` of the leading axis.
template <typename Scalar>
Var<Scalar> select(Var<Scalar> x, Index index);

/// u [.., C, T] times per-channel weights w [.., C].
template <typename Scalar>
Var<Scalar> scale_channels(Var<Scalar> u, Var<Scalar> w);

/// Sum of all elements, as a rank-0 value.
template <typename Scalar>
Var<Scalar> sum(Var<Scalar> x);

/// Mean over rows of -sum(target * log_softmax(logits)). logits [C] or [N, C];
/// target rows must be probability vectors.
template <typename Scalar>
Var<Scalar> cross_entropy(Var<Scalar> logits, const Tensor<Scalar>& target);

template <typename Scalar>
Var<Scalar> operator+(Var<Scalar> a, Var<Scalar> b) {
  return add(a, b);
}

template <typename Scalar>
Var<Scalar> operator*(Scalar factor, Var<Scalar> x) {
  return scalar_mul(x, factor);
}

}  // namespace tcsk
