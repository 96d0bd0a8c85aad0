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

namespace tcsk {

/// Mono PCM audio with samples in [-1, 1].
struct AudioClip {
  std::vector<float> samples;
  int sample_rate = 44100;

  double duration_seconds() const {
    return static_cast<double>(samples.size()) / static_cast<double>(sample_rate);
  }
};

/// Reads a mono RIFF/WAVE file with 16- or 24-bit little-endian PCM samples.
AudioClip read_wav(const std::filesystem::path& path);

/// Writes mono PCM; `bits_per_sample` is 16 or 24. Samples are clipped to [-1, 1].
void write_wav(const std::filesystem::path& path, const AudioClip& clip, int bits_per_sample = 16);

}  // namespace tcsk
