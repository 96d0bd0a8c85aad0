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

#include <Eigen/Core>

namespace tcsk {

/// Binary (P5) 8-bit graymap. Values are clamped to [0, 1] and scaled to 0..255;
/// row 0 of `image` is the top row. Throws IoError on write failure.
void write_pgm(const std::filesystem::path& path, const Eigen::MatrixXf& image);

}  // namespace tcsk
