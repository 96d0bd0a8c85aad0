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

#include "tcsk/automl/search.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "tcsk/util/error.hpp"

namespace tcsk {
namespace {

constexpr std::uint64_t kSuggestStream = 0x5u;
constexpr std::uint64_t kSeedStream = 0xau;

}  // namespace

std::uint64_t trial_seed(std::uint64_t search_seed, Index trial_id) {
  return Rng(search_seed).fork(kSeedStream).fork(static_cast<std::uint64_t>(trial_id))();
}

std::optional<Trial> best_trial(std::span<const Trial> history) {
  std::optional<Trial> best;
  for (const auto& t : history) {
    if (t.status != TrialStatus::complete || !std::isfinite(t.objective)) continue;
    if (!best || t.objective > best->objective) best = t;
  }
  return best;
}

Trial run_search(const SearchSpace& space, const Evaluator& evaluate,
                 const SearchOptions& options, const TrialStore* store,
                 std::vector<Trial>* history_out) {
  space.validate();
  options.tpe.validate();
  if (options.n_trials < 1) throw ConfigError("search: the trial budget must be >= 1");
  std::vector<Trial> history = store ? store->load() : std::vector<Trial>{};
  for (std::size_t i = 0; i < history.size(); ++i) {
    if (history[i].trial_id != static_cast<Index>(i)) {
      throw FormatError("trial store " + store->path().string() + " has trial id " +
                        std::to_string(history[i].trial_id) + " at position " + std::to_string(i));
    }
  }
  const Rng base = Rng(options.seed).fork(kSuggestStream);
  for (Index id = static_cast<Index>(history.size()); id < options.n_trials; ++id) {
    Rng rng = base.fork(static_cast<std::uint64_t>(id));
    Trial trial;
    trial.trial_id = id;
    trial.seed = trial_seed(options.seed, id);
    trial.config = tpe_suggest(history, space, options.tpe, rng);
    const auto start = std::chrono::steady_clock::now();
    try {
      trial.objective = evaluate(trial.config, trial.seed);
      trial.status = std::isfinite(trial.objective) ? TrialStatus::complete : TrialStatus::failed;
    } catch (const std::exception&) {
      trial.status = TrialStatus::failed;
    }
    if (trial.status == TrialStatus::failed) {
      trial.objective = std::numeric_limits<double>::quiet_NaN();
    }
    if (options.timing) {
      trial.wall_time_s =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    if (store) store->append(trial);
    history.push_back(trial);
    if (options.on_trial) options.on_trial(trial);
  }
  if (history_out) *history_out = history;
  const auto best = best_trial(history);
  if (!best) throw Error("search: all " + std::to_string(history.size()) + " trials failed");
  return *best;
}

TwoStageResult two_stage_search(const SearchSpace& model_space,
                                const SearchSpace& gridmask_space, const Evaluator& evaluate,
                                const SearchOptions& model_options,
                                const SearchOptions& gridmask_options,
                                const TrialStore* model_store,
                                const TrialStore* gridmask_store) {
  for (const auto& spec : gridmask_space.specs) {
    for (const auto& m : model_space.specs) {
      if (m.name == spec.name) {
        throw ConfigError("two-stage search: parameter '" + spec.name + "' is in both spaces");
      }
    }
  }
  TwoStageResult result;
  result.model = run_search(model_space, evaluate, model_options, model_store);
  const ParamConfig frozen = result.model.config;
  const Evaluator with_model = [&](const ParamConfig& gm, std::uint64_t seed) {
    ParamConfig merged = frozen;
    merged.insert(gm.begin(), gm.end());
    return evaluate(merged, seed);
  };
  result.gridmask = run_search(gridmask_space, with_model, gridmask_options, gridmask_store);
  result.combined = frozen;
  result.combined.insert(result.gridmask.config.begin(), result.gridmask.config.end());
  return result;
}

}  // namespace tcsk
