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
#include <map>
#include <string>
#include <vector>

#include "tcsk/numerics/rng.hpp"

namespace tcsk {

/// Parameter name to value. Choice values are stored as the chosen number.
using ParamConfig = std::map<std::string, double>;

enum class ParamKind { choice, uniform };

struct ParamSpec {
  std::string name;
  ParamKind kind = ParamKind::uniform;
  /// Choice members, in declaration order.
  std::vector<double> values;
  /// Uniform bounds.
  double low = 0.0;
  double high = 0.0;

  static ParamSpec choice(std::string name, std::vector<double> values);
  static ParamSpec uniform(std::string name, double low, double high);

  void validate() const;
  bool contains(double value) const;
  /// Position of `value` among the choice members, or -1.
  int index_of(double value) const;
};

struct SearchSpace {
  std::vector<ParamSpec> specs;

  /// Non-empty, unique names, every spec valid.
  void validate() const;
  /// Same keys as the specs and every value inside its spec.
  bool contains(const ParamConfig& config) const;
};

/// learning_rate, batch_size, l_size, c_channels, p_size (choices) and dropout (uniform).
SearchSpace model_search_space();
/// p and mr, both uniform.
SearchSpace gridmask_search_space();

/// One `[name]` section per parameter with `type = "choice" | "uniform"` and
/// `space = [...]` (members for a choice, [low, high] for a uniform).
SearchSpace load_search_space(const std::filesystem::path& path);
SearchSpace parse_search_space(std::string_view text, const std::string& source = "<space>");

/// Each choice uniform over its members, each uniform over [low, high).
ParamConfig sample_prior(const SearchSpace& space, Rng& rng);

}  // namespace tcsk
