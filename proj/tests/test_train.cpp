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

#include "tcsk/data/synthetic.hpp"
#include "tcsk/model/checkpoint.hpp"
#include "tcsk/numerics/ops.hpp"
#include "tcsk/train/adam.hpp"
#include "tcsk/train/evaluate.hpp"
#include "tcsk/train/trainer.hpp"
#include "tcsk/util/error.hpp"
#include "test_util.hpp"

using namespace tcsk;

namespace {

TcskNetConfig small_config(Index n_classes) {
  TcskNetConfig c;
  c.in_channels = 6;
  c.c_channels = 5;
  c.l_size = 4;
  c.p_size = 3;
  c.n_classes = n_classes;
  return c;
}

// Class k has a positive offset on coefficient k.
Dataset toy_dataset(Index n_classes, Index per_class, Index bins, std::uint64_t seed) {
  Rng rng(seed);
  Dataset d;
  for (Index k = 0; k < n_classes; ++k) d.labels.push_back("c" + std::to_string(k));
  for (int split = 0; split < 2; ++split)
    for (Index k = 0; k < n_classes; ++k)
      for (Index i = 0; i < per_class; ++i) {
        FeatureMap fm;
        const Index frames = 20 + rng.uniform_int(0, 8);
        fm.coeffs = Tensor<float>({bins, frames});
        for (Index j = 0; j < fm.coeffs.size(); ++j) fm.coeffs[j] = static_cast<float>(0.5 * rng.normal());
        for (Index t = 0; t < frames; ++t) fm.coeffs(k % bins, t) += 1.5f;
        (split == 0 ? d.train : d.test).push_back({fm, k});
      }
  return d;
}

std::vector<Tensor<float>> snapshot(TcskNet<float>& net) {
  std::vector<Tensor<float>> out;
  for (auto& p : net.parameters()) out.push_back(*p.second);
  return out;
}

}  // namespace

TEST_CASE("lr schedule") {
  TrainConfig cfg;
  CHECK(lr_at(0, cfg) == 0.001);
  for (Index e = 5; e <= 9; ++e) CHECK(lr_at(e, cfg) == 0.001 * 0.98);
  for (Index e = 10; e <= 14; ++e) CHECK(lr_at(e, cfg) == 0.001 * (0.98 * 0.98));
  CHECK(lr_at(5, cfg) == doctest::Approx(0.00098).epsilon(1e-14));
  CHECK(lr_at(14, cfg) == doctest::Approx(0.0009604).epsilon(1e-14));
  for (Index e = 1; e < 200; ++e) {
    CHECK(lr_at(e, cfg) <= lr_at(e - 1, cfg));
    if (e % 5 != 0) CHECK(lr_at(e, cfg) == lr_at(e - 1, cfg));
  }
  CHECK_THROWS_AS(lr_at(-1, cfg), ConfigError);
  cfg.decay_factor = 1.5;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.decay_interval = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.batch_size = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  CHECK(TrainConfig{}.epochs == 100);
}

TEST_CASE("adam updates") {
  Tensor<float> w = Tensor<float>::from({3}, {0.5f, -1.0f, 2.0f});
  const Tensor<float> w0 = w;

  SUBCASE("zero gradient and no decay leaves parameters unchanged") {
    Adam adam({{"w", &w}});
    w.grad() = Vector<float>::Zero(3);
    for (int i = 0; i < 10; ++i) adam.step(0.001);
    CHECK(w == w0);
    CHECK(adam.step_count() == 10);
  }
  SUBCASE("constant gradient moves each step by lr") {
    Adam adam({{"w", &w}});
    w.grad() = Vector<float>::Constant(3, 0.3f);
    for (int i = 0; i < 500; ++i) {
      const Tensor<float> before = w;
      adam.step(0.001);
      for (Index j = 0; j < 3; ++j) CHECK(before[j] - w[j] == doctest::Approx(0.001).epsilon(1e-3));
    }
  }
  SUBCASE("decoupled decay scales by 1 - lr*wd") {
    AdamConfig cfg;
    cfg.weight_decay = 0.0005;
    Adam adam({{"w", &w}}, cfg);
    adam.step(0.001);
    for (Index j = 0; j < 3; ++j) {
      const auto expected = static_cast<float>(w0[j] * (1.0 - 5e-7));
      CHECK(std::abs(w[j] - expected) <= std::nextafter(std::abs(expected), 10.0f) - std::abs(expected));
    }
    CHECK(w[0] < w0[0]);
  }
  SUBCASE("matches a double-precision reference") {
    AdamConfig cfg;
    cfg.weight_decay = 0.01;
    Rng rng(3);
    for (auto mode : {WeightDecayMode::decoupled, WeightDecayMode::l2}) {
      cfg.weight_decay_mode = mode;
      Tensor<float> p = w0;
      Adam adam({{"p", &p}}, cfg);
      std::vector<double> ref(w0.data().data(), w0.data().data() + 3), m(3, 0.0), v(3, 0.0);
      for (int t = 1; t <= 20; ++t) {
        Vector<float> g(3);
        for (Index j = 0; j < 3; ++j) g[j] = static_cast<float>(rng.normal());
        p.grad() = g;
        const double lr = 0.01 / t;
        adam.step(lr);
        for (std::size_t j = 0; j < 3; ++j) {
          double gj = g[static_cast<Index>(j)];
          if (mode == WeightDecayMode::l2) gj += 0.01 * ref[j];
          m[j] = 0.9 * m[j] + 0.1 * gj;
          v[j] = 0.999 * v[j] + 0.001 * gj * gj;
          const double mh = m[j] / (1 - std::pow(0.9, t));
          const double vh = v[j] / (1 - std::pow(0.999, t));
          const double decay = mode == WeightDecayMode::decoupled ? lr * 0.01 * ref[j] : 0.0;
          ref[j] = ref[j] - decay - lr * mh / (std::sqrt(vh) + 1e-8);
        }
      }
      for (std::size_t j = 0; j < 3; ++j) CHECK(p[static_cast<Index>(j)] == doctest::Approx(ref[j]).epsilon(1e-5));
    }
  }
  SUBCASE("non-finite gradient aborts the step") {
    Tensor<float> other = Tensor<float>::from({2}, {1.0f, 2.0f});
    Adam adam({{"other", &other}, {"layer.weight", &w}});
    other.grad() = Vector<float>::Ones(2);
    w.grad() = Vector<float>::Zero(3);
    (*w.grad())[1] = std::numeric_limits<float>::quiet_NaN();
    CHECK_THROWS_WITH_AS(adam.step(0.001), doctest::Contains("layer.weight"), NumericError);
    CHECK(w == w0);
    CHECK(other == Tensor<float>::from({2}, {1.0f, 2.0f}));
    CHECK(adam.step_count() == 0);
  }
}

TEST_CASE("epoch batching") {
  const auto b = epoch_batches(4, 2, 1, Rng(1));
  REQUIRE(b.size() == 2);
  std::vector<std::size_t> all;
  for (const auto& x : b) all.insert(all.end(), x.begin(), x.end());
  std::sort(all.begin(), all.end());
  CHECK(all == std::vector<std::size_t>{0, 1, 2, 3});
  CHECK(epoch_batches(5, 2, 1, Rng(1)).size() == 3);
  const auto folded = epoch_batches(5, 2, 2, Rng(1));
  REQUIRE(folded.size() == 2);
  CHECK(folded.back().size() == 3);
  CHECK(epoch_batches(10, 16, 1, Rng(1)).size() == 1);
  CHECK(epoch_batches(10, 3, 1, Rng(2)) == epoch_batches(10, 3, 1, Rng(2)));
  CHECK(epoch_batches(10, 3, 1, Rng(2)) != epoch_batches(10, 3, 1, Rng(3)));
}

TEST_CASE("one epoch on 4 examples at batch 2 takes 2 steps") {
  Dataset d = toy_dataset(2, 2, 6, 1);
  Rng init(1);
  TcskNet<float> net = TcskNet<float>::initialized(small_config(2), init);
  TrainConfig cfg;
  cfg.epochs = 1;
  cfg.batch_size = 2;
  const TrainReport r = train(net, d, cfg);
  CHECK(r.steps == 2);
  REQUIRE(r.epochs.size() == 1);
  CHECK(r.epochs[0].lr == 0.001);
  CHECK(r.epochs[0].seconds == 0.0);
}

TEST_CASE("one optimizer step touches exactly param_count scalars") {
  Dataset d = toy_dataset(3, 2, 6, 2);
  Rng init(2);
  TcskNet<float> net = TcskNet<float>::initialized(small_config(3), init);
  const auto before = snapshot(net);
  TrainConfig cfg;
  cfg.epochs = 1;
  cfg.batch_size = 6;
  CHECK(train(net, d, cfg).steps == 1);
  const auto after = snapshot(net);
  Index changed = 0;
  for (std::size_t i = 0; i < before.size(); ++i)
    for (Index j = 0; j < before[i].size(); ++j) changed += before[i][j] != after[i][j];
  CHECK(changed == param_count(small_config(3)));
  CHECK(Adam(net.parameters()).scalar_count() == param_count(small_config(3)));
}

TEST_CASE("loss on a fixed synthetic batch decreases for 50 steps") {
  testing::TempDir dir("train_fixed");
  SyntheticSpec spec;
  spec.clips_per_class = 2;
  spec.duration_s = 0.6;
  const Dataset d = load_dataset(generate_synthetic(spec, dir.path()));
  TcskNetConfig nc;
  nc.dropout = 0.0;
  Rng init(4);
  TcskNet<float> net = TcskNet<float>::initialized(nc, init);
  Tensor<float> inputs({static_cast<Index>(d.train.size()), 39, d.train[0].features.frames()});
  Tensor<float> targets({static_cast<Index>(d.train.size()), 10});
  for (std::size_t i = 0; i < d.train.size(); ++i) {
    const auto n = d.train[i].features.coeffs.size();
    inputs.data().segment(static_cast<Index>(i) * n, n) = d.train[i].features.coeffs.data();
    targets(static_cast<Index>(i), d.train[i].label) = 1.0f;
  }
  Adam adam(net.parameters(), {.weight_decay = 0.0005});
  Rng unused(0);
  double previous = std::numeric_limits<double>::infinity();
  double first = 0.0;
  for (int step = 0; step < 50; ++step) {
    for (auto& p : net.parameters()) p.second->zero_grad();
    Graph<float> g;
    const auto loss = cross_entropy(net.forward(g.constant(inputs), Mode::train, unused, true), targets);
    const double value = loss.value()[0];
    if (step == 0) first = value;
    CHECK(value < previous);
    previous = value;
    g.backward(loss);
    adam.step(0.001);
  }
  MESSAGE("fixed-batch loss " << first << " -> " << previous);
}

TEST_CASE("training is bit-reproducible") {
  testing::TempDir dir("train_det");
  Dataset d = toy_dataset(3, 4, 6, 3);
  TrainConfig cfg;
  cfg.epochs = 3;
  cfg.batch_size = 4;
  cfg.seed = 11;
  cfg.augmentation.policy = AugmentPolicy::gridmask_then_mixup;
  cfg.augmentation.gridmask.d_min = 2;
  cfg.augmentation.gridmask.d_max = 6;

  auto run = [&](const std::string& tag) {
    Rng init(9);
    TcskNet<float> net = TcskNet<float>::initialized(small_config(3), init);
    TrainOutputs out;
    out.report_csv = dir / (tag + ".csv");
    out.checkpoint = dir / (tag + ".tskn");
    TrainReport r = train(net, d, cfg, out);
    return std::make_pair(snapshot(net), r);
  };
  const auto [w1, r1] = run("a");
  const auto [w2, r2] = run("b");
  CHECK(w1 == w2);
  CHECK(r1.epochs == r2.epochs);
  CHECK(testing::read_file(dir / "a.csv") == testing::read_file(dir / "b.csv"));
  CHECK(testing::read_file(dir / "a.tskn") == testing::read_file(dir / "b.tskn"));

  cfg.seed = 12;
  const auto [w3, r3] = run("c");
  CHECK(w1 != w3);

  const std::string csv = testing::read_file(dir / "a.csv");
  CHECK(csv.rfind("epoch,lr,train_loss,val_acc,seconds\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}

TEST_CASE("best checkpoint keeps the earliest best epoch") {
  testing::TempDir dir("train_best");
  Dataset d = toy_dataset(3, 4, 6, 5);
  TrainConfig cfg;
  cfg.epochs = 6;
  cfg.batch_size = 4;
  cfg.lr0 = 0.01;
  Rng init(5);
  TcskNet<float> net = TcskNet<float>::initialized(small_config(3), init);
  TrainOutputs out;
  out.checkpoint = dir / "best.tskn";
  Index callbacks = 0;
  out.on_epoch = [&](const EpochRecord&) { ++callbacks; };
  const TrainReport r = train(net, d, cfg, out);
  CHECK(callbacks == 6);
  double best = -1.0;
  Index best_epoch = -1;
  for (const auto& e : r.epochs)
    if (e.val_acc > best) {
      best = e.val_acc;
      best_epoch = e.epoch;
    }
  CHECK(r.best_epoch == best_epoch);
  CHECK(r.best_val_acc == best);
  Checkpoint ck = load_checkpoint(dir / "best.tskn");
  CHECK(evaluate(ck.net, d.test).accuracy == best);
  CHECK(ck.labels == d.labels);
  REQUIRE(r.best.has_value());
  TcskNet<float> kept = *r.best;
  CHECK(evaluate(kept, d.test).accuracy == best);
}

TEST_CASE("non-finite loss aborts with coordinates") {
  Dataset d = toy_dataset(2, 2, 6, 6);
  Rng init(6);
  TcskNet<float> net = TcskNet<float>::initialized(small_config(2), init);
  net.parameters().back().second->data().setConstant(std::numeric_limits<float>::infinity());
  TrainConfig cfg;
  cfg.epochs = 1;
  CHECK_THROWS_WITH_AS(train(net, d, cfg), doctest::Contains("epoch 0 batch 0"), NumericError);
}

TEST_CASE("train rejects inconsistent inputs") {
  Dataset d = toy_dataset(2, 2, 6, 7);
  Rng init(7);
  TcskNet<float> net = TcskNet<float>::initialized(small_config(3), init);
  CHECK_THROWS_AS(train(net, d, TrainConfig{}), ConfigError);
  TcskNet<float> two = TcskNet<float>::initialized(small_config(2), init);
  Dataset empty = d;
  empty.test.clear();
  CHECK_THROWS_AS(train(two, empty, TrainConfig{}), ConfigError);
}

TEST_CASE("evaluation metrics") {
  Dataset d = toy_dataset(10, 3, 10, 8);
  Rng init(8);
  TcskNetConfig cfg = small_config(10);
  cfg.in_channels = 10;
  TcskNet<float> net = TcskNet<float>::initialized(cfg, init);

  SUBCASE("constant class-0 predictor scores 0.1 on a balanced split") {
    auto params = net.parameters();
    for (auto& [name, t] : params)
      if (name == "fc.weight") t->data().setZero();
      else if (name == "fc.bias") {
        t->data().setZero();
        t->data()[0] = 1.0f;
      }
    const EvalResult r = evaluate(net, d.test);
    CHECK(r.accuracy == doctest::Approx(0.1));
    CHECK(r.confusion.col(0).sum() == 30);
  }
  SUBCASE("confusion matrix consistency") {
    const EvalResult r = evaluate(net, d.test);
    for (Index k = 0; k < 10; ++k) CHECK(r.confusion.row(k).sum() == 3);
    CHECK(r.accuracy == doctest::Approx(static_cast<double>(r.confusion.trace()) /
                                        static_cast<double>(r.confusion.sum())));
    CHECK(evaluate(net, d.test).predictions == r.predictions);
  }
  std::vector<Index> labels{0, 1, 1, 2};
  std::vector<Index> preds{0, 1, 2, 2};
  const EvalResult s = score_predictions(labels, preds, 3);
  CHECK(s.accuracy == 0.75);
  CHECK(s.confusion(1, 2) == 1);
  CHECK_THROWS_AS(score_predictions(labels, std::vector<Index>{0}, 3), DimensionError);
  CHECK_THROWS_AS(score_predictions(labels, std::vector<Index>{0, 1, 5, 2}, 3), DimensionError);
  CHECK(argmax(Tensor<float>::from({3}, {1.0f, 3.0f, 3.0f})) == 1);
}
