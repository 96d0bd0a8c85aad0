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

#include "tcsk/automl/trial_store.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "tcsk/util/error.hpp"

namespace tcsk {

using nlohmann::json;

std::string to_string(TrialStatus status) {
  switch (status) {
    case TrialStatus::pending:
      return "pending";
    case TrialStatus::complete:
      return "complete";
    case TrialStatus::failed:
      return "failed";
  }
  return "unknown";
}

TrialStatus parse_trial_status(std::string_view name) {
  if (name == "pending") return TrialStatus::pending;
  if (name == "complete") return TrialStatus::complete;
  if (name == "failed") return TrialStatus::failed;
  throw FormatError("unknown trial status '" + std::string(name) + "'");
}

std::string trial_to_json(const Trial& trial) {
  json j;
  j["trial_id"] = trial.trial_id;
  j["seed"] = trial.seed;
  j["config"] = trial.config;
  j["objective"] = std::isfinite(trial.objective) && trial.status == TrialStatus::complete
                       ? json(trial.objective)
                       : json(nullptr);
  j["status"] = to_string(trial.status);
  j["wall_time_s"] = trial.wall_time_s;
  return j.dump();
}

Trial trial_from_json(std::string_view line) {
  try {
    const json j = json::parse(line);
    Trial t;
    t.trial_id = j.at("trial_id").get<Index>();
    t.seed = j.at("seed").get<std::uint64_t>();
    t.config = j.at("config").get<ParamConfig>();
    t.status = parse_trial_status(j.at("status").get<std::string>());
    const json& obj = j.at("objective");
    t.objective = obj.is_null() ? std::numeric_limits<double>::quiet_NaN() : obj.get<double>();
    t.wall_time_s = j.at("wall_time_s").get<double>();
    if (t.status == TrialStatus::complete && !std::isfinite(t.objective)) {
      throw FormatError("complete trial without a finite objective");
    }
    return t;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed trial record: ") + e.what());
  }
}

std::vector<Trial> TrialStore::load() const {
  std::vector<Trial> trials;
  if (!std::filesystem::exists(path_)) return trials;
  std::ifstream in(path_);
  if (!in) throw IoError("cannot open trial store " + path_.string());
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      trials.push_back(trial_from_json(line));
    } catch (const FormatError& e) {
      throw FormatError(path_.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return trials;
}

void TrialStore::append(const Trial& trial) const {
  std::ofstream out(path_, std::ios::app);
  if (!out) throw IoError("cannot append to trial store " + path_.string());
  out << trial_to_json(trial) << '\n';
  if (!out) throw IoError("failed writing trial store " + path_.string());
}

}  // namespace tcsk
