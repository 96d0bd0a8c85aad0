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

#include <doctest.h>

#include <cmath>
#include <fstream>

#include "tcsk/model/checkpoint.hpp"
#include "tcsk/model/tcsknet.hpp"
#include "tcsk/numerics/grad_check.hpp"
#include "tcsk/util/error.hpp"
#include "test_util.hpp"

using namespace tcsk;
using D = Tensor<double>;
using Vars = std::span<const Var<double>>;

namespace {

D random_tensor(Shape shape, Rng& rng, double scale = 1.0) {
  D t(std::move(shape));
  for (Index i = 0; i < t.size(); ++i) t[i] = scale * rng.normal();
  return t;
}

FeatureMap random_features(Index bins, Index frames, Rng& rng) {
  FeatureMap fm;
  fm.coeffs = Tensor<float>({bins, frames});
  for (Index i = 0; i < fm.coeffs.size(); ++i) fm.coeffs[i] = static_cast<float>(rng.normal());
  return fm;
}

TcskNetConfig tiny_config() {
  TcskNetConfig c;
  c.in_channels = 4;
  c.c_channels = 3;
  c.l_size = 2;
  c.p_size = 3;
  c.n_classes = 3;
  return c;
}

struct Fused {
  D output;
  D attention;
};

// Two-branch fusion with heads (wa, ba) and (wb, bb).
Fused fuse(const D& u1, const D& u2, const D& wz, const D& bz, const D& wa, const D& ba,
           const D& wb, const D& bb) {
  Graph<double> g;
  const auto r = sk_fuse<double>({g.constant(u1), g.constant(u2)}, g.constant(wz), g.constant(bz),
                                 {{g.constant(wa), g.constant(ba)}, {g.constant(wb), g.constant(bb)}});
  return {r.output.value(), r.attention.value()};
}

// Scalar count by direct expansion: weights plus biases of every layer.
Index hand_count(Index in, Index c, Index l, Index p, Index n) {
  auto block = [&](Index cin) {
    return (c * cin * 3 + c) + (c * cin * 5 + c) + 2 * (c + c) + (l * c + l) + (c * l + c) +
           (c * l + c);
  };
  return block(in) + block(c) + (c * c * p + c) + (n * c + n);
}

}  // namespace

TEST_CASE("sk_fuse with identical heads averages the branches") {
  Rng rng(1);
  const D u1 = random_tensor({5, 7}, rng);
  const D u2 = random_tensor({5, 7}, rng);
  const D wz = random_tensor({3, 5}, rng), bz = random_tensor({3}, rng);
  const D w = random_tensor({5, 3}, rng), b = random_tensor({5}, rng);
  const Fused f = fuse(u1, u2, wz, bz, w, b, w, b);
  for (Index i = 0; i < u1.size(); ++i) CHECK(f.output[i] == (u1[i] + u2[i]) / 2.0);
}

TEST_CASE("sk_fuse saturates towards the branch with the larger logit") {
  Rng rng(2);
  D u1({4, 6}), u2({4, 6});
  for (Index i = 0; i < u1.size(); ++i) {
    u1[i] = rng.uniform(1.0, 2.0);
    u2[i] = rng.uniform(-1.0, 1.0);
  }
  const D wz = random_tensor({2, 4}, rng), bz = random_tensor({2}, rng);
  const D zero_w({4, 2});
  const D ba = D::constant({4}, 20.0), bb({4});
  const Fused f = fuse(u1, u2, wz, bz, zero_w, ba, zero_w, bb);
  for (Index i = 0; i < u1.size(); ++i) {
    CHECK(std::abs(f.output[i] - u1[i]) <= 1e-8 * std::abs(u1[i]));
  }
}

TEST_CASE("sk_fuse attention sums to one and output is a convex combination") {
  Rng rng(3);
  for (int sample = 0; sample < 1000; ++sample) {
    const Index c = rng.uniform_int(1, 8), l = rng.uniform_int(1, 4), t = rng.uniform_int(1, 6);
    const D u1 = random_tensor({c, t}, rng, 3.0), u2 = random_tensor({c, t}, rng, 3.0);
    const Fused f =
        fuse(u1, u2, random_tensor({l, c}, rng, 3.0), random_tensor({l}, rng),
             random_tensor({c, l}, rng, 3.0), random_tensor({c}, rng),
             random_tensor({c, l}, rng, 3.0), random_tensor({c}, rng));
    REQUIRE(f.attention.shape() == Shape{2, c});
    for (Index i = 0; i < c; ++i) {
      CHECK(std::abs(f.attention[i] + f.attention[c + i] - 1.0) <= 1e-9);
      for (Index k = 0; k < t; ++k) {
        const Index j = i * t + k;
        CHECK(f.output[j] >= std::min(u1[j], u2[j]) - 1e-12);
        CHECK(f.output[j] <= std::max(u1[j], u2[j]) + 1e-12);
      }
    }
  }
}

TEST_CASE("sk_fuse rejects mismatched branches") {
  Graph<double> g;
  const auto a = g.constant(D({2, 3})), b = g.constant(D({2, 4}));
  const auto wz = g.constant(D({1, 2})), bz = g.constant(D({1}));
  const auto w = g.constant(D({2, 1})), bias = g.constant(D({2}));
  CHECK_THROWS_AS(sk_fuse<double>({a, b}, wz, bz, {{w, bias}, {w, bias}}), DimensionError);
  CHECK_THROWS_AS(sk_fuse<double>({a, a}, wz, bz, {{w, bias}}), DimensionError);
}

TEST_CASE("block keeps the time extent") {
  Rng rng(4);
  TcskNet<double> net = TcskNet<double>::initialized(tiny_config(), rng);
  for (Index t : {5, 6, 17, 40}) {
    Graph<double> g;
    const ParamBinder<double> bind(g, false);
    const auto y = tcsk_block_forward(g.constant(random_tensor({4, t}, rng)), net.block1(),
                                      Mode::eval, bind);
    CHECK(y.shape() == Shape{3, t});
  }
  Graph<double> g;
  const ParamBinder<double> bind(g, false);
  CHECK_THROWS_AS(tcsk_block_forward(g.constant(D({5, 8})), net.block1(), Mode::eval, bind),
                  DimensionError);
}

TEST_CASE("block maps zero input to zero output with zero biases") {
  Rng rng(5);
  TcskNet<double> net = TcskNet<double>::initialized(tiny_config(), rng);
  auto& b = net.block1();
  for (D* bias : {&b.conv3.bias, &b.conv5.bias}) *bias = D(bias->shape());
  Graph<double> g;
  const ParamBinder<double> bind(g, false);
  const auto y = tcsk_block_forward(g.constant(D({4, 9})), b, Mode::eval, bind);
  CHECK(y.value().data().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("block gradients match finite differences") {
  for (bool separable : {false, true}) {
    TcskNetConfig cfg = tiny_config();
    cfg.separable = separable;
    Rng rng(6);
    TcskNet<double> net = TcskNet<double>::initialized(cfg, rng);
    auto params = net.parameters();
    std::vector<std::pair<std::string, D*>> block_params;
    for (const auto& p : params) {
      if (p.first.starts_with("block1.")) block_params.push_back(p);
    }
    const GradCheckFn fn = [&](Graph<double>& g, Vars v) {
      ParamBinder<double>::Overrides o;
      for (std::size_t i = 0; i < block_params.size(); ++i) o[block_params[i].second] = v[i + 1];
      return tcsk_block_forward(v[0], net.block1(), Mode::train, ParamBinder<double>(g, false, o));
    };
    for (int point = 0; point < 5; ++point) {
      std::vector<D> inputs{random_tensor({2, 4, 8}, rng)};
      for (const auto& p : block_params) inputs.push_back(*p.second);
      const auto report = grad_check(fn, inputs);
      INFO("separable " << separable << " input " << report.worst_input << " analytic "
                        << report.analytic << " numeric " << report.numeric);
      CHECK(report.max_rel_error < 1e-4);
    }
  }
}

TEST_CASE("full model gradients match finite differences") {
  for (bool separable : {false, true}) {
    TcskNetConfig cfg = tiny_config();
    cfg.separable = separable;
    Rng rng(7);
    TcskNet<double> net = TcskNet<double>::initialized(cfg, rng);
    const auto params = net.parameters();
    const GradCheckFn fn = [&](Graph<double>& g, Vars v) {
      ParamBinder<double>::Overrides o;
      for (std::size_t i = 0; i < params.size(); ++i) o[params[i].second] = v[i + 1];
      Rng unused(0);
      return net.forward(v[0], Mode::eval, unused, ParamBinder<double>(g, false, o));
    };
    for (int point = 0; point < 5; ++point) {
      std::vector<D> inputs{random_tensor({1, 4, 16}, rng)};
      for (const auto& p : params) inputs.push_back(*p.second);
      const auto report = grad_check(fn, inputs);
      INFO("separable " << separable << " input " << report.worst_input << " analytic "
                        << report.analytic << " numeric " << report.numeric);
      CHECK(report.max_rel_error < 1e-4);
    }
  }
}

TEST_CASE("logits have class length for any long enough input") {
  Rng rng(8);
  TcskNet<float> net = TcskNet<float>::initialized({}, rng);
  for (Index t : {400, 860}) {
    const Tensor<float> logits = net.predict(random_features(39, t, rng));
    CHECK(logits.shape() == Shape{10});
    CHECK(logits.all_finite());
    Graph<double> g;
    const auto p = softmax(g.constant(logits.cast<double>()));
    CHECK(std::abs(p.value().data().sum() - 1.0) <= 1e-9);
  }
  CHECK(net.min_frames() == 44);
  CHECK_THROWS_WITH_AS(net.predict(random_features(39, 43, rng)), doctest::Contains("44"),
                       DimensionError);
  CHECK_NOTHROW(net.predict(random_features(39, 44, rng)));
}

TEST_CASE("time-constant input gives length-invariant logits") {
  Rng rng(9);
  TcskNet<float> net = TcskNet<float>::initialized({}, rng);
  Eigen::VectorXf column(39);
  for (Index i = 0; i < 39; ++i) column[i] = static_cast<float>(rng.normal());
  auto constant_map = [&](Index t) {
    FeatureMap fm;
    fm.coeffs = Tensor<float>({39, t});
    fm.coeffs.matrix().colwise() = column;
    return fm;
  };
  const Tensor<float> reference = net.predict(constant_map(44));
  for (Index t : {45, 100, 200, 400, 430, 860, 1001}) {
    const Tensor<float> logits = net.predict(constant_map(t));
    for (Index k = 0; k < 10; ++k) CHECK(std::abs(logits[k] - reference[k]) <= 1e-6f);
  }
}

TEST_CASE("batched forward matches per-example forward in eval mode") {
  Rng rng(10);
  TcskNet<double> net = TcskNet<double>::initialized(tiny_config(), rng);
  const D a = random_tensor({4, 20}, rng), b = random_tensor({4, 20}, rng);
  Graph<double> g;
  Rng unused(0);
  const auto batched = net.forward(stack<double>({g.constant(a), g.constant(b)}), Mode::eval,
                                   unused, false);
  const auto ya = net.forward(g.constant(a), Mode::eval, unused, false);
  const auto yb = net.forward(g.constant(b), Mode::eval, unused, false);
  for (Index k = 0; k < 3; ++k) {
    CHECK(batched.value()(0, k) == doctest::Approx(ya.value()[k]).epsilon(1e-12));
    CHECK(batched.value()(1, k) == doctest::Approx(yb.value()[k]).epsilon(1e-12));
  }
}

TEST_CASE("config validation") {
  TcskNetConfig c;
  CHECK_NOTHROW(c.validate());
  c.p_size = 10;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.dropout = 1.0;
  CHECK_THROWS_AS(TcskNet<float>{c}, ConfigError);
  c = {};
  c.n_classes = 1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.l_size = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("param_count matches the direct expansion") {
  TcskNetConfig unit;
  unit.in_channels = 1;
  unit.c_channels = 1;
  unit.l_size = 1;
  unit.p_size = 1;
  unit.n_classes = 2;
  // Per block: conv3 4, conv5 6, two BN 4, fc_z 2, fc_a 2, fc_b 2.
  CHECK(param_count(unit) == 2 * 20 + 2 + 4);

  Rng rng(11);
  for (int i = 0; i < 50; ++i) {
    TcskNetConfig c;
    c.in_channels = rng.uniform_int(1, 40);
    c.c_channels = rng.uniform_int(1, 70);
    c.l_size = rng.uniform_int(1, 60);
    c.p_size = 2 * rng.uniform_int(0, 8) + 1;
    c.n_classes = rng.uniform_int(2, 20);
    CHECK(param_count(c) == hand_count(c.in_channels, c.c_channels, c.l_size, c.p_size, c.n_classes));
    TcskNetConfig more = c;
    more.n_classes += 3;
    CHECK(param_count(more) - param_count(c) == 3 * c.c_channels + 3);
  }

  const TcskNetConfig baseline;
  const Index n = param_count(baseline);
  MESSAGE("baseline parameter count " << n << " (reference figure 28K)");
  CHECK(n == hand_count(39, 60, 50, 11, 10));
}

TEST_CASE("param_count equals the scalars that receive gradients") {
  for (bool separable : {false, true}) {
    TcskNetConfig cfg;
    cfg.separable = separable;
    Rng rng(12);
    TcskNet<float> net = TcskNet<float>::initialized(cfg, rng);
    Graph<float> g;
    Tensor<float> x({2, 39, 60});
    for (Index i = 0; i < x.size(); ++i) x[i] = static_cast<float>(rng.normal());
    Rng drop(1);
    const auto logits = net.forward(g.constant(x), Mode::train, drop, true);
    g.backward(cross_entropy(logits, Tensor<float>::from({2, 10}, {1, 0, 0, 0, 0, 0, 0, 0, 0, 0,
                                                                   0, 1, 0, 0, 0, 0, 0, 0, 0, 0})));
    Index with_grad = 0, total = 0;
    for (auto& [name, t] : net.parameters()) {
      total += t->size();
      if (t->grad()) with_grad += t->grad()->size();
    }
    CHECK(with_grad == param_count(cfg));
    CHECK(total == param_count(cfg));
  }
}

TEST_CASE("checkpoint round trip is bit exact") {
  testing::TempDir dir("ckpt");
  Rng rng(13);
  TcskNet<float> net = TcskNet<float>::initialized({}, rng);
  for (auto& [name, s] : net.batchnorm_stats()) {
    for (Index i = 0; i < s->mean.size(); ++i) {
      s->mean[i] = static_cast<float>(rng.normal());
      s->var[i] = static_cast<float>(rng.uniform(0.5, 2.0));
    }
  }
  FeatureStats stats;
  stats.mean = Eigen::VectorXf::Random(39);
  stats.stddev = Eigen::VectorXf::Random(39).cwiseAbs();
  const std::vector<std::string> labels{"airport", "bus", "metro", "metro_station", "park",
                                        "public_square", "shopping_mall", "street_pedestrian",
                                        "street_traffic", "tram"};
  save_checkpoint(dir / "a.tskn", net, stats, labels);
  Checkpoint back = load_checkpoint(dir / "a.tskn");

  CHECK(back.net.config() == net.config());
  CHECK(back.labels == labels);
  CHECK(back.stats.mean == stats.mean);
  CHECK(back.stats.stddev == stats.stddev);
  auto original = net.parameters();
  auto loaded = back.net.parameters();
  REQUIRE(original.size() == loaded.size());
  for (std::size_t i = 0; i < original.size(); ++i) {
    CHECK(original[i].first == loaded[i].first);
    CHECK(*original[i].second == *loaded[i].second);
  }
  auto s1 = net.batchnorm_stats();
  auto s2 = back.net.batchnorm_stats();
  for (std::size_t i = 0; i < s1.size(); ++i) {
    CHECK(s1[i].second->mean == s2[i].second->mean);
    CHECK(s1[i].second->var == s2[i].second->var);
  }
  const FeatureMap clip = random_features(39, 300, rng);
  CHECK(net.predict(clip) == back.net.predict(clip));
}

TEST_CASE("checkpoint errors") {
  testing::TempDir dir("ckpt_err");
  Rng rng(14);
  TcskNetConfig cfg = tiny_config();
  cfg.separable = true;
  const TcskNet<float> net = TcskNet<float>::initialized(cfg, rng);
  save_checkpoint(dir / "a.tskn", net, {}, {"a", "b", "c"});
  CHECK(load_checkpoint(dir / "a.tskn").net.config().separable);
  const std::string bytes = testing::read_file(dir / "a.tskn");
  auto write = [&](const std::string& name, const std::string& content) {
    std::ofstream out(dir / name, std::ios::binary);
    out << content;
  };
  for (std::size_t cut : {std::size_t{2}, std::size_t{6}, bytes.size() / 3, bytes.size() - 1}) {
    write("cut.tskn", bytes.substr(0, cut));
    CHECK_THROWS_AS(load_checkpoint(dir / "cut.tskn"), FormatError);
  }
  std::string versioned = bytes;
  versioned[4] = 9;
  write("v.tskn", versioned);
  CHECK_THROWS_WITH_AS(load_checkpoint(dir / "v.tskn"), doctest::Contains("version 9"),
                       FormatError);
  std::string magic = bytes;
  magic[0] = 'X';
  write("m.tskn", magic);
  CHECK_THROWS_AS(load_checkpoint(dir / "m.tskn"), FormatError);
  CHECK_THROWS_AS(load_checkpoint(dir / "missing.tskn"), IoError);
}
