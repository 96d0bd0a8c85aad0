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
#include <optional>
#include <string>
#include <vector>

#include "tcsk/data/manifest.hpp"
#include "tcsk/features/mfcc.hpp"

namespace tcsk {

struct Example {
  FeatureMap features;
  Index label = 0;
};

struct Dataset {
  std::vector<Example> train;
  std::vector<Example> test;
  std::vector<std::string> labels;
  FeatureStats stats;

  Index n_classes() const { return static_cast<Index>(labels.size()); }
};

struct FeatureLoadOptions {
  MfccConfig mfcc;
  /// Cache directory; falls back to $FEATURE_CACHE_DIR, then no caching.
  std::optional<std::filesystem::path> cache_dir;
};

/// Cache directory from the options or the environment.
std::optional<std::filesystem::path> resolve_cache_dir(const FeatureLoadOptions& opts);

/// Raw MFCCs of one manifest entry, read from or written to the cache.
FeatureMap load_features(const Manifest& manifest, const ManifestEntry& entry,
                         const FeatureLoadOptions& opts = {});

/// Loads every clip, computes statistics on the train split and normalizes both
/// splits with them. `stats`, when given, replaces the computed statistics.
Dataset load_dataset(const Manifest& manifest, const FeatureLoadOptions& opts = {},
                     const std::optional<FeatureStats>& stats = std::nullopt);

/// Per-clip mean over frames, one column per example.
Eigen::MatrixXd clip_means(const std::vector<Example>& examples);

/// Accuracy of assigning each test clip to the class with the nearest mean
/// clip-mean vector of the train split.
double nearest_centroid_accuracy(const Dataset& data);

}  // namespace tcsk
