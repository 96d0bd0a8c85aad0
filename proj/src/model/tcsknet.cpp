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

#include "tcsk/model/tcsknet.hpp"

#include <cmath>

#include "tcsk/util/error.hpp"

namespace tcsk {
namespace {

constexpr Index kPoolKernel = 2;
constexpr Index kBranchKernels[2] = {3, 5};

template <typename Scalar>
ConvParams<Scalar> make_conv(Index cin, Index cout, Index kernel, bool separable) {
  ConvParams<Scalar> p;
  if (separable) {
    p.depthwise_weight = Tensor<Scalar>({cin, 1, kernel});
    p.depthwise_bias = Tensor<Scalar>({cin});
    p.weight = Tensor<Scalar>({cout, cin, 1});
  } else {
    p.weight = Tensor<Scalar>({cout, cin, kernel});
  }
  p.bias = Tensor<Scalar>({cout});
  return p;
}

template <typename Scalar>
BatchNormParams<Scalar> make_bn(Index channels) {
  return {Tensor<Scalar>::constant({channels}, Scalar(1)), Tensor<Scalar>({channels}),
          BatchNormStats<Scalar>::fresh(channels)};
}

template <typename Scalar>
LinearParams<Scalar> make_linear(Index in, Index out) {
  return {Tensor<Scalar>({out, in}), Tensor<Scalar>({out})};
}

template <typename Scalar>
TcskBlockParams<Scalar> make_block(Index cin, const TcskNetConfig& cfg) {
  TcskBlockParams<Scalar> b;
  b.conv3 = make_conv<Scalar>(cin, cfg.c_channels, kBranchKernels[0], cfg.separable);
  b.conv5 = make_conv<Scalar>(cin, cfg.c_channels, kBranchKernels[1], cfg.separable);
  b.bn3 = make_bn<Scalar>(cfg.c_channels);
  b.bn5 = make_bn<Scalar>(cfg.c_channels);
  b.fc_z = make_linear<Scalar>(cfg.c_channels, cfg.l_size);
  b.fc_a = make_linear<Scalar>(cfg.l_size, cfg.c_channels);
  b.fc_b = make_linear<Scalar>(cfg.l_size, cfg.c_channels);
  return b;
}

// Same-padding temporal convolution, replicate-padded.
template <typename Scalar>
Var<Scalar> temporal_conv(Var<Scalar> x, ConvParams<Scalar>& p, const ParamBinder<Scalar>& bind) {
  const Index kernel = p.kernel();
  const Index pad = (kernel - 1) / 2;
  if (p.separable()) {
    x = depthwise_conv1d(x, bind(p.depthwise_weight), bind(p.depthwise_bias), 1, pad,
                         PadMode::replicate);
    return conv1d(x, bind(p.weight), bind(p.bias), 1, 0);
  }
  return conv1d(x, bind(p.weight), bind(p.bias), 1, pad, PadMode::replicate);
}

template <typename Scalar>
void fill_uniform(Tensor<Scalar>& t, double bound, Rng& rng) {
  for (Index i = 0; i < t.size(); ++i) t[i] = static_cast<Scalar>(rng.uniform(-bound, bound));
}

// Kaiming-uniform for ReLU networks: bound = sqrt(6 / fan_in).
template <typename Scalar>
void init_weight(Tensor<Scalar>& w, Tensor<Scalar>& b, Index fan_in, Rng& rng) {
  fill_uniform(w, std::sqrt(6.0 / static_cast<double>(fan_in)), rng);
  fill_uniform(b, 1.0 / std::sqrt(static_cast<double>(fan_in)), rng);
}

template <typename Scalar>
void init_conv(ConvParams<Scalar>& p, Rng& rng) {
  if (p.separable()) {
    init_weight(p.depthwise_weight, p.depthwise_bias, p.kernel(), rng);
    init_weight(p.weight, p.bias, p.weight.shape()[1], rng);
  } else {
    init_weight(p.weight, p.bias, p.weight.shape()[1] * p.weight.shape()[2], rng);
  }
}

template <typename Scalar>
void init_block(TcskBlockParams<Scalar>& b, Rng& rng) {
  init_conv(b.conv3, rng);
  init_conv(b.conv5, rng);
  init_weight(b.fc_z.weight, b.fc_z.bias, b.fc_z.weight.shape()[1], rng);
  init_weight(b.fc_a.weight, b.fc_a.bias, b.fc_a.weight.shape()[1], rng);
  init_weight(b.fc_b.weight, b.fc_b.bias, b.fc_b.weight.shape()[1], rng);
}

template <typename Scalar>
void append_conv(std::vector<std::pair<std::string, Tensor<Scalar>*>>& out,
                 const std::string& prefix, ConvParams<Scalar>& p) {
  if (p.separable()) {
    out.emplace_back(prefix + ".depthwise_weight", &p.depthwise_weight);
    out.emplace_back(prefix + ".depthwise_bias", &p.depthwise_bias);
  }
  out.emplace_back(prefix + ".weight", &p.weight);
  out.emplace_back(prefix + ".bias", &p.bias);
}

template <typename Scalar>
void append_block(std::vector<std::pair<std::string, Tensor<Scalar>*>>& out,
                  const std::string& prefix, TcskBlockParams<Scalar>& b) {
  append_conv(out, prefix + ".conv3", b.conv3);
  append_conv(out, prefix + ".conv5", b.conv5);
  out.emplace_back(prefix + ".bn3.gamma", &b.bn3.gamma);
  out.emplace_back(prefix + ".bn3.beta", &b.bn3.beta);
  out.emplace_back(prefix + ".bn5.gamma", &b.bn5.gamma);
  out.emplace_back(prefix + ".bn5.beta", &b.bn5.beta);
  for (auto [name, fc] : {std::pair{"fc_z", &b.fc_z}, {"fc_a", &b.fc_a}, {"fc_b", &b.fc_b}}) {
    out.emplace_back(prefix + "." + name + ".weight", &fc->weight);
    out.emplace_back(prefix + "." + name + ".bias", &fc->bias);
  }
}

template <typename To, typename From>
ConvParams<To> cast_conv(const ConvParams<From>& p) {
  return {p.weight.template cast<To>(), p.bias.template cast<To>(),
          p.depthwise_weight.template cast<To>(), p.depthwise_bias.template cast<To>()};
}

template <typename To, typename From>
BatchNormParams<To> cast_bn(const BatchNormParams<From>& p) {
  return {p.gamma.template cast<To>(), p.beta.template cast<To>(),
          {p.stats.mean.template cast<To>(), p.stats.var.template cast<To>()}};
}

template <typename To, typename From>
LinearParams<To> cast_linear(const LinearParams<From>& p) {
  return {p.weight.template cast<To>(), p.bias.template cast<To>()};
}

template <typename To, typename From>
TcskBlockParams<To> cast_block(const TcskBlockParams<From>& b) {
  return {cast_conv<To>(b.conv3), cast_conv<To>(b.conv5), cast_bn<To>(b.bn3),
          cast_bn<To>(b.bn5),     cast_linear<To>(b.fc_z), cast_linear<To>(b.fc_a),
          cast_linear<To>(b.fc_b)};
}

}  // namespace

void TcskNetConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError("TcskNetConfig: " + msg); };
  if (in_channels < 1) fail("in_channels must be >= 1");
  if (c_channels < 1) fail("c_channels must be >= 1");
  if (l_size < 1) fail("l_size must be >= 1");
  if (p_size < 1 || p_size % 2 == 0) fail("p_size must be odd and >= 1, got " + std::to_string(p_size));
  if (!(dropout >= 0.0 && dropout < 1.0)) fail("dropout must lie in [0, 1)");
  if (n_classes < 2) fail("n_classes must be >= 2");
}

template <typename Scalar>
Index ConvParams<Scalar>::kernel() const {
  return separable() ? depthwise_weight.shape()[2] : weight.shape()[2];
}

template <typename Scalar>
Index TcskBlockParams<Scalar>::in_channels() const {
  return conv3.separable() ? conv3.depthwise_weight.shape()[0] : conv3.weight.shape()[1];
}

template <typename Scalar>
SkFusion<Scalar> sk_fuse(const std::vector<Var<Scalar>>& branches, Var<Scalar> fc_z_weight,
                         Var<Scalar> fc_z_bias,
                         const std::vector<std::pair<Var<Scalar>, Var<Scalar>>>& heads) {
  if (branches.size() < 2) throw DimensionError("sk_fuse: need at least two branches");
  if (heads.size() != branches.size()) {
    throw DimensionError("sk_fuse: " + std::to_string(heads.size()) + " attention heads for " +
                         std::to_string(branches.size()) + " branches");
  }
  for (const auto& b : branches) {
    if (b.shape() != branches.front().shape()) {
      throw DimensionError("sk_fuse: branch shapes " + shape_string(b.shape()) + " and " +
                           shape_string(branches.front().shape()) + " differ");
    }
  }
  Var<Scalar> fused_input = branches.front();
  for (std::size_t i = 1; i < branches.size(); ++i) fused_input = fused_input + branches[i];
  const Var<Scalar> squeeze = global_average_pool(fused_input);
  const Var<Scalar> z = relu(linear(squeeze, fc_z_weight, fc_z_bias));

  SkFusion<Scalar> out;
  for (const auto& [w, b] : heads) out.logits.push_back(linear(z, w, b));
  out.attention = softmax(stack(out.logits), 0);
  for (std::size_t i = 0; i < branches.size(); ++i) {
    const Var<Scalar> weighted =
        scale_channels(branches[i], select(out.attention, static_cast<Index>(i)));
    out.output = i == 0 ? weighted : out.output + weighted;
  }
  return out;
}

template <typename Scalar>
Var<Scalar> tcsk_block_forward(Var<Scalar> x, TcskBlockParams<Scalar>& p, Mode mode,
                               const ParamBinder<Scalar>& bind) {
  const Index channel_axis = x.shape().size() == 3 ? 1 : 0;
  if (x.shape().size() < 2 || x.shape()[channel_axis] != p.in_channels()) {
    throw DimensionError("tcsk_block_forward: input " + shape_string(x.shape()) +
                         " does not have " + std::to_string(p.in_channels()) + " channels");
  }
  const Var<Scalar> u1 = relu(batchnorm1d(temporal_conv(x, p.conv3, bind), bind(p.bn3.gamma),
                                          bind(p.bn3.beta), p.bn3.stats, mode));
  const Var<Scalar> u2 = relu(batchnorm1d(temporal_conv(x, p.conv5, bind), bind(p.bn5.gamma),
                                          bind(p.bn5.beta), p.bn5.stats, mode));
  return sk_fuse<Scalar>({u1, u2}, bind(p.fc_z.weight), bind(p.fc_z.bias),
                         {{bind(p.fc_a.weight), bind(p.fc_a.bias)},
                          {bind(p.fc_b.weight), bind(p.fc_b.bias)}})
      .output;
}

template <typename Scalar>
TcskNet<Scalar>::TcskNet(const TcskNetConfig& config) : config_(config) {
  config_.validate();
  block1_ = make_block<Scalar>(config_.in_channels, config_);
  block2_ = make_block<Scalar>(config_.c_channels, config_);
  head_conv_ = make_conv<Scalar>(config_.c_channels, config_.c_channels, config_.p_size,
                                 config_.separable);
  fc_ = make_linear<Scalar>(config_.c_channels, config_.n_classes);
}

template <typename Scalar>
TcskNet<Scalar> TcskNet<Scalar>::initialized(const TcskNetConfig& config, Rng& rng) {
  TcskNet net(config);
  init_block(net.block1_, rng);
  init_block(net.block2_, rng);
  init_conv(net.head_conv_, rng);
  init_weight(net.fc_.weight, net.fc_.bias, config.c_channels, rng);
  return net;
}

template <typename Scalar>
Var<Scalar> TcskNet<Scalar>::forward(Var<Scalar> input, Mode mode, Rng& dropout_rng,
                                     bool track_grads) {
  return forward(input, mode, dropout_rng, ParamBinder<Scalar>(input.graph(), track_grads));
}

template <typename Scalar>
Var<Scalar> TcskNet<Scalar>::forward(Var<Scalar> input, Mode mode, Rng& dropout_rng,
                                     const ParamBinder<Scalar>& bind) {
  const Shape& shape = input.shape();
  if (shape.size() != 2 && shape.size() != 3) {
    throw DimensionError("TcskNet: input must be [C, T] or [N, C, T], got " + shape_string(shape));
  }
  const Index frames = shape.back();
  if (frames < min_frames()) {
    throw DimensionError("TcskNet: input has " + std::to_string(frames) +
                         " frames; at least " + std::to_string(min_frames()) +
                         " are needed so the pooled length covers p_size=" +
                         std::to_string(config_.p_size));
  }
  Var<Scalar> h = tcsk_block_forward(input, block1_, mode, bind);
  h = max_pool1d(h, kPoolKernel, kPoolKernel);
  h = tcsk_block_forward(h, block2_, mode, bind);
  h = max_pool1d(h, kPoolKernel, kPoolKernel);
  h = relu(temporal_conv(h, head_conv_, bind));
  h = global_average_pool(h);
  h = dropout(h, config_.dropout, mode, dropout_rng);
  return linear(h, bind(fc_.weight), bind(fc_.bias));
}

template <typename Scalar>
Tensor<Scalar> TcskNet<Scalar>::predict(const FeatureMap& fm) {
  Graph<Scalar> g;
  Rng unused(0);
  const Var<Scalar> x = g.constant(fm.coeffs.template cast<Scalar>());
  return forward(x, Mode::eval, unused, false).value();
}

template <typename Scalar>
std::vector<std::pair<std::string, Tensor<Scalar>*>> TcskNet<Scalar>::parameters() {
  std::vector<std::pair<std::string, Tensor<Scalar>*>> out;
  append_block(out, "block1", block1_);
  append_block(out, "block2", block2_);
  append_conv(out, "head_conv", head_conv_);
  out.emplace_back("fc.weight", &fc_.weight);
  out.emplace_back("fc.bias", &fc_.bias);
  return out;
}

template <typename Scalar>
std::vector<std::pair<std::string, BatchNormStats<Scalar>*>> TcskNet<Scalar>::batchnorm_stats() {
  return {{"block1.bn3", &block1_.bn3.stats},
          {"block1.bn5", &block1_.bn5.stats},
          {"block2.bn3", &block2_.bn3.stats},
          {"block2.bn5", &block2_.bn5.stats}};
}

template <typename Scalar>
template <typename Other>
TcskNet<Other> TcskNet<Scalar>::cast() const {
  TcskNet<Other> out(config_);
  out.block1_ = cast_block<Other>(block1_);
  out.block2_ = cast_block<Other>(block2_);
  out.head_conv_ = cast_conv<Other>(head_conv_);
  out.fc_ = cast_linear<Other>(fc_);
  return out;
}

Index param_count(const TcskNetConfig& c) {
  c.validate();
  const Index ch = c.c_channels;
  auto conv = [&](Index cin, Index cout, Index k) {
    return c.separable ? (cin * k + cin) + (cout * cin + cout) : cout * cin * k + cout;
  };
  auto block = [&](Index cin) {
    const Index branches = conv(cin, ch, 3) + conv(cin, ch, 5);
    const Index norms = 2 * (2 * ch);
    const Index attention = (c.l_size * ch + c.l_size) + 2 * (ch * c.l_size + ch);
    return branches + norms + attention;
  };
  return block(c.in_channels) + block(ch) + conv(ch, ch, c.p_size) +
         (c.n_classes * ch + c.n_classes);
}

template struct ConvParams<float>;
template struct ConvParams<double>;
template struct TcskBlockParams<float>;
template struct TcskBlockParams<double>;
template class TcskNet<float>;
template class TcskNet<double>;
template TcskNet<double> TcskNet<float>::cast<double>() const;
template TcskNet<float> TcskNet<double>::cast<float>() const;
template TcskNet<float> TcskNet<float>::cast<float>() const;

#define TCSK_INSTANTIATE_MODEL(S)                                                               \
  template SkFusion<S> sk_fuse(const std::vector<Var<S>>&, Var<S>, Var<S>,                      \
                               const std::vector<std::pair<Var<S>, Var<S>>>&);                  \
  template Var<S> tcsk_block_forward(Var<S>, TcskBlockParams<S>&, Mode, const ParamBinder<S>&);

TCSK_INSTANTIATE_MODEL(float)
TCSK_INSTANTIATE_MODEL(double)

#undef TCSK_INSTANTIATE_MODEL

}  // namespace tcsk
