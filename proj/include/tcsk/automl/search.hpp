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

#include <functional>
#include <optional>
#include <vector>

#include "tcsk/automl/tpe.hpp"
#include "tcsk/automl/trial_store.hpp"

namespace tcsk {

/// Scores a configuration; must be deterministic in (config, seed). Exceptions
/// and non-finite results mark the trial failed.
using Evaluator = std::function<double(const ParamConfig& config, std::uint64_t seed)>;

struct SearchOptions {
  Index n_trials = 20;
  std::uint64_t seed = 0;
  TpeConfig tpe;
  /// Record wall-clock seconds per trial; zero otherwise so stores are reproducible.
  bool timing = false;
  /// Called after each trial is recorded.
  std::function<void(const Trial&)> on_trial;
};

/// Seed handed to the evaluator for trial `trial_id`.
std::uint64_t trial_seed(std::uint64_t search_seed, Index trial_id);

/// Runs trials sequentially until the history holds n_trials, appending each to
/// `store` when given. Trials already in the store are kept and the search resumes
/// after them; suggestion i depends only on (seed, i, history), so resuming yields
/// the same sequence as an uninterrupted run. Returns the best complete trial
/// (earliest on ties); throws Error if none completed.
Trial run_search(const SearchSpace& space, const Evaluator& evaluate,
                 const SearchOptions& options, const TrialStore* store = nullptr,
                 std::vector<Trial>* history_out = nullptr);

/// Best complete trial, earliest on ties.
std::optional<Trial> best_trial(std::span<const Trial> history);

struct TwoStageResult {
  Trial model;
  Trial gridmask;
  /// Union of both winning configurations.
  ParamConfig combined;
};

/// Searches the model space, freezes the winner, then searches the GridMask space.
/// The second-stage evaluator receives the frozen model parameters merged with
/// each GridMask suggestion.
TwoStageResult two_stage_search(const SearchSpace& model_space,
                                const SearchSpace& gridmask_space, const Evaluator& evaluate,
                                const SearchOptions& model_options,
                                const SearchOptions& gridmask_options,
                                const TrialStore* model_store = nullptr,
                                const TrialStore* gridmask_store = nullptr);

}  // namespace tcsk
