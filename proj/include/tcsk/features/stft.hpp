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

#include <Eigen/Dense>

#include <complex>
#include <span>

#include "tcsk/features/audio.hpp"
#include "tcsk/numerics/tensor.hpp"

namespace tcsk {

/// One-sided spectrum per frame: rows are the n_fft/2 + 1 bins, columns are frames.
using Spectrogram = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic>;

struct StftConfig {
  Index n_fft = 1024;
  Index hop = 512;
};

/// 1 + floor((samples - n_fft) / hop); requires samples >= n_fft.
Index frame_count(Index samples, const StftConfig& cfg = {});

/// Periodic Hann window of length n.
Eigen::VectorXd hann_window(Index n);

/// Hann-windowed DFT of frames [t*hop, t*hop + n_fft). The trailing partial frame is dropped.
Spectrogram stft(std::span<const float> samples, const StftConfig& cfg = {});
Spectrogram stft(const AudioClip& clip, const StftConfig& cfg = {});

}  // namespace tcsk
