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

#include "tcsk/automl/search_space.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "tcsk/util/error.hpp"
#include "tcsk/util/flat_config.hpp"

namespace tcsk {

ParamSpec ParamSpec::choice(std::string name, std::vector<double> values) {
  ParamSpec s;
  s.name = std::move(name);
  s.kind = ParamKind::choice;
  s.values = std::move(values);
  return s;
}

ParamSpec ParamSpec::uniform(std::string name, double low, double high) {
  ParamSpec s;
  s.name = std::move(name);
  s.kind = ParamKind::uniform;
  s.low = low;
  s.high = high;
  return s;
}

void ParamSpec::validate() const {
  if (name.empty()) throw ConfigError("search space: parameter without a name");
  if (kind == ParamKind::choice) {
    if (values.size() < 2) throw ConfigError("search space: choice '" + name + "' needs >= 2 values");
    std::set<double> unique(values.begin(), values.end());
    if (unique.size() != values.size()) {
      throw ConfigError("search space: choice '" + name + "' repeats a value");
    }
    for (double v : values) {
      if (!std::isfinite(v)) throw ConfigError("search space: choice '" + name + "' has a non-finite value");
    }
  } else if (!(std::isfinite(low) && std::isfinite(high) && low < high)) {
    throw ConfigError("search space: uniform '" + name + "' needs finite low < high");
  }
}

bool ParamSpec::contains(double value) const {
  if (kind == ParamKind::choice) return index_of(value) >= 0;
  return value >= low && value <= high;
}

int ParamSpec::index_of(double value) const {
  const auto it = std::find(values.begin(), values.end(), value);
  return it == values.end() ? -1 : static_cast<int>(it - values.begin());
}

void SearchSpace::validate() const {
  if (specs.empty()) throw ConfigError("search space is empty");
  std::set<std::string> names;
  for (const auto& s : specs) {
    s.validate();
    if (!names.insert(s.name).second) {
      throw ConfigError("search space: duplicate parameter '" + s.name + "'");
    }
  }
}

bool SearchSpace::contains(const ParamConfig& config) const {
  if (config.size() != specs.size()) return false;
  return std::all_of(specs.begin(), specs.end(), [&](const ParamSpec& s) {
    const auto it = config.find(s.name);
    return it != config.end() && s.contains(it->second);
  });
}

SearchSpace model_search_space() {
  return {{
      ParamSpec::choice("learning_rate", {0.0001, 0.001, 0.01}),
      ParamSpec::choice("batch_size", {16, 32, 64, 128, 256}),
      ParamSpec::choice("l_size", {25, 30, 35, 40, 45, 50}),
      ParamSpec::choice("c_channels", {30, 40, 50, 60}),
      ParamSpec::choice("p_size", {9, 11, 13, 15, 17}),
      ParamSpec::uniform("dropout", 0.1, 0.4),
  }};
}

SearchSpace gridmask_search_space() {
  return {{ParamSpec::uniform("p", 0.5, 1.0), ParamSpec::uniform("mr", 0.1, 0.5)}};
}

namespace {

SearchSpace space_from(const FlatConfig& cfg, const std::string& source) {
  SearchSpace space;
  for (const auto& name : cfg.sections()) {
    if (name.empty()) throw ConfigError(source + ": settings must sit under a [parameter] header");
    cfg.require_known(name, {"type", "space"});
    const std::string type = cfg.string(name, "type");
    const std::vector<double> values = cfg.numbers(name, "space");
    if (type == "choice") {
      space.specs.push_back(ParamSpec::choice(name, values));
    } else if (type == "uniform") {
      if (values.size() != 2) {
        throw ConfigError(source + ": uniform '" + name + "' needs space = [low, high]");
      }
      space.specs.push_back(ParamSpec::uniform(name, values[0], values[1]));
    } else {
      throw ConfigError(source + ": '" + name + "' has type '" + type +
                        "', expected \"choice\" or \"uniform\"");
    }
  }
  space.validate();
  return space;
}

}  // namespace

SearchSpace parse_search_space(std::string_view text, const std::string& source) {
  return space_from(FlatConfig::parse(text, source), source);
}

SearchSpace load_search_space(const std::filesystem::path& path) {
  return space_from(FlatConfig::load(path), path.string());
}

ParamConfig sample_prior(const SearchSpace& space, Rng& rng) {
  space.validate();
  ParamConfig config;
  for (const auto& s : space.specs) {
    if (s.kind == ParamKind::choice) {
      config[s.name] = s.values[static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<std::int64_t>(s.values.size()) - 1))];
    } else {
      config[s.name] = rng.uniform(s.low, s.high);
    }
  }
  return config;
}

}  // namespace tcsk
