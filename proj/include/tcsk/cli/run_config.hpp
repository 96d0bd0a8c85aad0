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

#include <filesystem>
#include <string>
#include <string_view>

#include "tcsk/automl/search.hpp"
#include "tcsk/data/dataset.hpp"
#include "tcsk/features/mfcc.hpp"
#include "tcsk/model/tcsknet.hpp"
#include "tcsk/train/schedule.hpp"

namespace tcsk {

struct SearchSettings {
  Index trials = 20;
  /// Training epochs per trial.
  Index epochs = 10;
  TpeConfig tpe;
};

/// Every setting a subcommand needs, loaded from a flat TOML file with sections
/// [model], [train], [gridmask], [augment], [specmask], [features] and [search].
/// All sections and keys are optional; unknown ones are rejected.
struct RunConfig {
  TcskNetConfig model;
  TrainConfig train;
  MfccConfig features;
  SearchSettings search;

  void validate() const;
};

RunConfig parse_run_config(std::string_view text, const std::string& source = "<config>");
RunConfig load_run_config(const std::filesystem::path& path);

/// Inverse of parse_run_config; every field is written.
std::string to_toml(const RunConfig& cfg);

/// Overrides the fields named by search parameters: learning_rate, batch_size,
/// l_size, c_channels, p_size, dropout, p, mr. Other names throw ConfigError.
RunConfig apply_params(RunConfig cfg, const ParamConfig& params);

/// Search objective: trains a fresh network configured by `params` for
/// `search.epochs` epochs and returns the best validation accuracy.
Evaluator training_evaluator(const Dataset& data, const RunConfig& base);

}  // namespace tcsk
