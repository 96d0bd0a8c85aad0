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

#include <fstream>

#include "tcsk/cli/run_config.hpp"
#include "tcsk/util/error.hpp"
#include "tcsk/util/flat_config.hpp"
#include "test_util.hpp"

using namespace tcsk;

TEST_CASE("flat config parses sections, scalars and arrays") {
  const FlatConfig cfg = FlatConfig::parse(R"(
seed = 7          # top level
[model]
c_channels = 60
dropout = 0.2
separable = false
name = "base # not a comment"
[space]
values = [1, 2.5, -3e-2]
empty = []
)");
  CHECK(cfg.sections() == std::vector<std::string>{"", "model", "space"});
  CHECK(cfg.integer("", "seed") == 7);
  CHECK(cfg.integer("model", "c_channels") == 60);
  CHECK(cfg.number("model", "dropout") == 0.2);
  CHECK_FALSE(cfg.boolean("model", "separable"));
  CHECK(cfg.string("model", "name") == "base # not a comment");
  CHECK(cfg.numbers("space", "values") == std::vector<double>{1, 2.5, -3e-2});
  CHECK(cfg.numbers("space", "empty").empty());
  CHECK(cfg.number_or("model", "missing", 4.0) == 4.0);
  CHECK(cfg.keys("model") == std::vector<std::string>{"c_channels", "dropout", "separable", "name"});
}

TEST_CASE("flat config errors carry the source and line") {
  CHECK_THROWS_WITH_AS(FlatConfig::parse("[a]\nx 1\n", "f.toml"), doctest::Contains("f.toml:2"),
                       ConfigError);
  CHECK_THROWS_AS(FlatConfig::parse("[a]\nx = 1\nx = 2\n"), ConfigError);
  CHECK_THROWS_AS(FlatConfig::parse("[a\n"), ConfigError);
  CHECK_THROWS_AS(FlatConfig::parse("[a]\n[a]\n"), ConfigError);
  const FlatConfig cfg = FlatConfig::parse("[m]\nx = 1.5\ny = abc\nz = [1, q]\n");
  CHECK_THROWS_WITH_AS(cfg.integer("m", "x"), doctest::Contains(":2:"), ConfigError);
  CHECK_THROWS_AS(cfg.number("m", "y"), ConfigError);
  CHECK_THROWS_AS(cfg.numbers("m", "z"), ConfigError);
  CHECK_THROWS_WITH_AS(cfg.number("m", "w"), doctest::Contains("m.w"), ConfigError);
  CHECK_THROWS_WITH_AS(cfg.require_known("m", {"x", "z"}), doctest::Contains("m.y"), ConfigError);
  CHECK_THROWS_AS(cfg.require_sections({"n"}), ConfigError);
  CHECK_THROWS_AS(FlatConfig::load("/nonexistent/x.toml"), IoError);
}

TEST_CASE("flat config loads from disk") {
  testing::TempDir dir("cfg");
  {
    std::ofstream out(dir / "a.toml");
    out << "[train]\nepochs = 3\n";
  }
  CHECK(FlatConfig::load(dir / "a.toml").integer("train", "epochs") == 3);
}

TEST_CASE("shipped presets") {
  const std::filesystem::path root = TCSK_SOURCE_DIR;
  const RunConfig base = load_run_config(root / "presets" / "baseline.toml");
  CHECK(base.train.batch_size == 16);
  CHECK(base.train.lr0 == 0.001);
  CHECK(base.model.c_channels == 60);
  CHECK(base.model.l_size == 50);
  CHECK(base.model.p_size == 11);
  CHECK(base.model.dropout == 0.2);
  CHECK(base.train.augmentation.gridmask.p == 0.6);
  CHECK(base.train.augmentation.gridmask.mr == 0.3);
  CHECK(base.train.augmentation.policy == AugmentPolicy::gridmask);
  CHECK(base.train.weight_decay == 0.0005);
  CHECK(base.train.epochs == 100);

  const RunConfig automl = load_run_config(root / "presets" / "automl.toml");
  CHECK(automl.train.batch_size == 12);
  CHECK(automl.train.lr0 == 0.003);
  CHECK(automl.model.c_channels == 40);
  CHECK(automl.model.l_size == 45);
  CHECK(automl.model.p_size == 15);
  CHECK(automl.model.dropout == 0.145);
  CHECK(automl.train.augmentation.gridmask.p == 0.52);
  CHECK(automl.train.augmentation.gridmask.mr == 0.31);
  MESSAGE("param_count baseline " << param_count(base.model) << ", automl "
                                  << param_count(automl.model));
  CHECK(param_count(automl.model) < param_count(base.model));
}

TEST_CASE("run config defaults, overrides and rejection") {
  const RunConfig empty = parse_run_config("");
  CHECK(empty.model == TcskNetConfig{});
  CHECK(empty.train.epochs == 100);
  CHECK(empty.train.augmentation.policy == AugmentPolicy::none);

  const RunConfig c = parse_run_config(R"(
[train]
weight_decay_mode = "l2"
seed = 9
[augment]
policy = "mixup_then_gridmask"
mixup_alpha = 0.4
[specmask]
time_masks = 1
[features]
hop = 256
[search]
trials = 7
n_startup = 3
)");
  CHECK(c.train.weight_decay_mode == WeightDecayMode::l2);
  CHECK(c.train.seed == 9);
  CHECK(c.train.augmentation.policy == AugmentPolicy::mixup_then_gridmask);
  CHECK(c.train.augmentation.mixup.alpha == 0.4);
  CHECK(c.train.augmentation.specmask.n_time_masks == 1);
  CHECK(c.features.hop == 256);
  CHECK(c.search.trials == 7);
  CHECK(c.search.tpe.n_startup == 3);

  CHECK_THROWS_WITH_AS(parse_run_config("[model]\nwidth = 3\n", "x.toml"),
                       doctest::Contains("width"), ConfigError);
  CHECK_THROWS_AS(parse_run_config("[optimizer]\nlr = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_run_config("[model]\ndropout = 1.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_run_config("[train]\nbatch_size = 2.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_run_config("[train]\nweight_decay_mode = \"sgd\"\n"), ConfigError);
  CHECK_THROWS_AS(parse_run_config("[augment]\npolicy = \"cutout\"\n"), ConfigError);
  CHECK_THROWS_AS(parse_run_config("[model]\nin_channels = 20\n"), ConfigError);
  CHECK_THROWS_AS(parse_run_config("[gridmask]\nmr = 0\n"), ConfigError);
  CHECK_THROWS_AS(load_run_config("/nonexistent/cfg.toml"), IoError);
}

TEST_CASE("run config text round trip") {
  RunConfig c;
  c.model.dropout = 0.145;
  c.model.separable = true;
  c.train.lr0 = 0.0031234567891;
  c.train.seed = 123456789;
  c.train.augmentation.policy = AugmentPolicy::gridmask_then_mixup;
  c.train.augmentation.gridmask.mr = 0.31;
  c.features.log_floor = 1e-12;
  const RunConfig back = parse_run_config(to_toml(c));
  CHECK(to_toml(back) == to_toml(c));
  CHECK(back.model == c.model);
  CHECK(back.train.lr0 == c.train.lr0);
  CHECK(back.train.seed == c.train.seed);
  CHECK(back.features.log_floor == c.features.log_floor);
  CHECK(back.train.augmentation.policy == c.train.augmentation.policy);
}

TEST_CASE("search parameters map onto the run config") {
  const RunConfig c = apply_params(RunConfig{}, {{"learning_rate", 0.003},
                                                 {"batch_size", 12},
                                                 {"l_size", 45},
                                                 {"c_channels", 40},
                                                 {"p_size", 15},
                                                 {"dropout", 0.145},
                                                 {"p", 0.52},
                                                 {"mr", 0.31}});
  CHECK(c.train.lr0 == 0.003);
  CHECK(c.train.batch_size == 12);
  CHECK(c.model.l_size == 45);
  CHECK(c.model.c_channels == 40);
  CHECK(c.model.p_size == 15);
  CHECK(c.model.dropout == 0.145);
  CHECK(c.train.augmentation.gridmask.p == 0.52);
  CHECK(c.train.augmentation.gridmask.mr == 0.31);
  CHECK_THROWS_AS(apply_params(RunConfig{}, {{"momentum", 0.9}}), ConfigError);
  CHECK_THROWS_AS(apply_params(RunConfig{}, {{"batch_size", 12.5}}), ConfigError);
}
