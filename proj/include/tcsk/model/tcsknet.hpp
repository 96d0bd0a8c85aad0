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

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tcsk/features/mfcc.hpp"
#include "tcsk/numerics/ops.hpp"

namespace tcsk {

/// Architecture hyperparameters.
struct TcskNetConfig {
  Index in_channels = 39;
  /// Output channels of both blocks and of the post-block convolution.
  Index c_channels = 60;
  /// Attention bottleneck width.
  Index l_size = 50;
  /// Kernel size of the post-block temporal convolution (odd).
  Index p_size = 11;
  double dropout = 0.2;
  Index n_classes = 10;
  /// Depthwise + pointwise temporal convolutions instead of full ones.
  bool separable = false;

  /// Throws ConfigError on the first violated constraint.
  void validate() const;
  friend bool operator==(const TcskNetConfig&, const TcskNetConfig&) = default;
};

template <typename Scalar>
struct ConvParams {
  /// [Cout, Cin, K]; pointwise [Cout, Cin, 1] when separable.
  Tensor<Scalar> weight;
  Tensor<Scalar> bias;
  /// [Cin, 1, K] and [Cin]; empty for a full convolution.
  Tensor<Scalar> depthwise_weight;
  Tensor<Scalar> depthwise_bias;

  bool separable() const { return depthwise_weight.size() > 0; }
  Index kernel() const;
};

template <typename Scalar>
struct BatchNormParams {
  Tensor<Scalar> gamma;
  Tensor<Scalar> beta;
  BatchNormStats<Scalar> stats;
};

template <typename Scalar>
struct LinearParams {
  Tensor<Scalar> weight;  // [out, in]
  Tensor<Scalar> bias;    // [out]
};

/// Two temporal-convolution branches (kernels 3 and 5) fused by selective-kernel attention.
template <typename Scalar>
struct TcskBlockParams {
  ConvParams<Scalar> conv3;
  ConvParams<Scalar> conv5;
  BatchNormParams<Scalar> bn3;
  BatchNormParams<Scalar> bn5;
  LinearParams<Scalar> fc_z;  // C1 -> L
  LinearParams<Scalar> fc_a;  // L -> C1
  LinearParams<Scalar> fc_b;  // L -> C1

  Index in_channels() const;
  Index out_channels() const { return conv3.bias.size(); }
};

/// Binds tensors into a graph as trainable parameters or as constants. Tensors
/// listed in `overrides` resolve to the given variables instead.
template <typename Scalar>
class ParamBinder {
 public:
  using Overrides = std::map<const Tensor<Scalar>*, Var<Scalar>>;

  ParamBinder(Graph<Scalar>& graph, bool track_grads, Overrides overrides = {})
      : graph_(graph), track_(track_grads), overrides_(std::move(overrides)) {}
  Var<Scalar> operator()(Tensor<Scalar>& t) const {
    if (const auto it = overrides_.find(&t); it != overrides_.end()) return it->second;
    return track_ ? graph_.parameter(t) : graph_.constant(t);
  }
  Graph<Scalar>& graph() const { return graph_; }

 private:
  Graph<Scalar>& graph_;
  bool track_;
  Overrides overrides_;
};

template <typename Scalar>
struct SkFusion {
  /// Per-channel convex combination of the branches.
  Var<Scalar> output;
  /// Softmax attention over branches, [branches, (N,) C1]; sums to one along axis 0.
  Var<Scalar> attention;
  /// Pre-softmax channel logits, one per branch.
  std::vector<Var<Scalar>> logits;
};

/// Selective-kernel fusion over equally shaped branches [(N,) C1, T]:
/// U = sum of branches, S = GAP(U), Z = relu(fc_z(S)), one logit vector per branch
/// from `heads`, softmax across branches per channel, output = sum_i a_i * branch_i.
template <typename Scalar>
SkFusion<Scalar> sk_fuse(const std::vector<Var<Scalar>>& branches, Var<Scalar> fc_z_weight,
                         Var<Scalar> fc_z_bias,
                         const std::vector<std::pair<Var<Scalar>, Var<Scalar>>>& heads);

/// relu(bn(conv)) for both kernels with same-padding, then sk_fuse.
template <typename Scalar>
Var<Scalar> tcsk_block_forward(Var<Scalar> x, TcskBlockParams<Scalar>& params, Mode mode,
                               const ParamBinder<Scalar>& bind);

/// block(in -> C) -> maxpool/2 -> block(C -> C) -> maxpool/2 -> conv(P) -> relu
/// -> GAP -> dropout -> fc(C -> classes).
template <typename Scalar>
class TcskNet {
 public:
  /// All weights zero, BN gamma one, running stats at (0, 1).
  explicit TcskNet(const TcskNetConfig& config);
  /// Kaiming-uniform (fan-in) weights, biases uniform in +-1/sqrt(fan_in).
  static TcskNet initialized(const TcskNetConfig& config, Rng& rng);

  const TcskNetConfig& config() const { return config_; }
  /// Shortest input accepted by forward().
  Index min_frames() const { return 4 * config_.p_size; }

  /// Raw logits: [classes] for [C, T] input, [N, classes] for [N, C, T].
  Var<Scalar> forward(Var<Scalar> input, Mode mode, Rng& dropout_rng, bool track_grads);
  /// Same, with parameters resolved through `bind`.
  Var<Scalar> forward(Var<Scalar> input, Mode mode, Rng& dropout_rng,
                      const ParamBinder<Scalar>& bind);

  /// Eval-mode logits for one feature map, without gradient tracking.
  Tensor<Scalar> predict(const FeatureMap& fm);

  /// Trainable tensors with stable dotted names, in a fixed order.
  std::vector<std::pair<std::string, Tensor<Scalar>*>> parameters();
  /// Running statistics stored as named vectors (mean and var per BN layer).
  std::vector<std::pair<std::string, BatchNormStats<Scalar>*>> batchnorm_stats();

  TcskBlockParams<Scalar>& block1() { return block1_; }
  TcskBlockParams<Scalar>& block2() { return block2_; }
  ConvParams<Scalar>& head_conv() { return head_conv_; }
  LinearParams<Scalar>& classifier() { return fc_; }

  template <typename Other>
  TcskNet<Other> cast() const;

 private:
  template <typename>
  friend class TcskNet;

  TcskNetConfig config_;
  TcskBlockParams<Scalar> block1_;
  TcskBlockParams<Scalar> block2_;
  ConvParams<Scalar> head_conv_;
  LinearParams<Scalar> fc_;
};

extern template class TcskNet<float>;
extern template class TcskNet<double>;

/// Learnable scalar count from the closed-form expansion of the architecture.
Index param_count(const TcskNetConfig& config);

}  // namespace tcsk
