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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "tcsk/features/mfcc.hpp"
#include "tcsk/model/tcsknet.hpp"

namespace tcsk {

// Layout (little-endian): "TSKN", u32 version, u32 field count and
// (name, f64) config fields, u32 coefficient count with float means and
// standard deviations, u32 label count and labels, u32 tensor count and
// (name, TNSR tensor) pairs. Running batch-norm statistics are stored as
// tensors named "<layer>.running_mean" and "<layer>.running_var".

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  TcskNet<float> net;
  FeatureStats stats;
  /// Class names indexed by logit position.
  std::vector<std::string> labels;
};

void save_checkpoint(const std::filesystem::path& path, const TcskNet<float>& net,
                     const FeatureStats& stats, const std::vector<std::string>& labels);

/// Throws IoError if unreadable, FormatError on bad magic, unsupported version,
/// truncation or tensors that do not fit the stored configuration.
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace tcsk
