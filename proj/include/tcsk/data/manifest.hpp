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
#include <string_view>
#include <vector>

namespace tcsk {

enum class Split { train, test };

std::string to_string(Split split);
std::optional<Split> parse_split(std::string_view name);

struct ManifestEntry {
  /// Relative to the manifest's directory.
  std::string path;
  std::string label;
  std::string device;
  Split split = Split::train;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct Manifest {
  std::filesystem::path root;
  std::vector<ManifestEntry> entries;
  /// Declared class list; label indices refer to positions in it.
  std::vector<std::string> labels;

  std::filesystem::path resolve(const ManifestEntry& e) const { return root / e.path; }
  /// Position of `label` in `labels`; throws FormatError when absent.
  std::size_t label_index(const std::string& label) const;
  std::size_t count(Split split) const;
};

/// Reads a CSV with header `path,label,device,split`. When `classes` is empty the
/// class list is the sorted set of labels present. Row errors are FormatErrors of
/// the form "<file>:<line>: ..."; a missing audio file is also a FormatError.
Manifest load_manifest(const std::filesystem::path& path,
                       const std::vector<std::string>& classes = {});

void write_manifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries);

}  // namespace tcsk
