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
#include <vector>

#include "tcsk/automl/trial.hpp"

namespace tcsk {

/// Append-only JSON-lines file, one object per trial with keys trial_id, seed,
/// config, objective (null unless complete), status and wall_time_s.
class TrialStore {
 public:
  explicit TrialStore(std::filesystem::path path) : path_(std::move(path)) {}

  const std::filesystem::path& path() const { return path_; }
  /// All stored trials in file order; empty if the file does not exist.
  /// Throws FormatError naming the line of a malformed record.
  std::vector<Trial> load() const;
  void append(const Trial& trial) const;

 private:
  std::filesystem::path path_;
};

std::string trial_to_json(const Trial& trial);
Trial trial_from_json(std::string_view line);

}  // namespace tcsk
