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

#include "tcsk/data/manifest.hpp"
#include "tcsk/numerics/tensor.hpp"

namespace tcsk {

/// Toy corpus: class k is a sinusoid at 300 * (k + 1) Hz with random phase,
/// +-3 dB amplitude jitter and white noise at 10 dB SNR.
struct SyntheticSpec {
  Index n_classes = 10;
  Index clips_per_class = 20;
  double duration_s = 2.0;
  int sample_rate = 44100;
  std::uint64_t seed = 0;
  double train_fraction = 0.7;
  double snr_db = 10.0;

  void validate() const;
};

/// Frequency of class k in Hz.
inline double synthetic_tone_hz(Index k) { return 300.0 * static_cast<double>(k + 1); }

/// Label string for class k, e.g. "tone_03".
std::string synthetic_label(Index k);

/// Samples of clip `clip` of class `k`; a pure function of (spec, k, clip).
std::vector<float> synthetic_clip(const SyntheticSpec& spec, Index k, Index clip);

/// Writes `<out_dir>/audio/*.wav` as 16-bit PCM and `<out_dir>/manifest.csv`.
Manifest generate_synthetic(const SyntheticSpec& spec, const std::filesystem::path& out_dir);

}  // namespace tcsk
