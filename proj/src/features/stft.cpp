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

#include "tcsk/features/stft.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <numbers>
#include <vector>

#include "tcsk/util/error.hpp"

namespace tcsk {

Index frame_count(Index samples, const StftConfig& cfg) {
  if (cfg.n_fft < 2 || cfg.hop < 1) throw ConfigError("stft: n_fft >= 2 and hop >= 1 required");
  if (samples < cfg.n_fft) {
    throw ConfigError("stft: clip has " + std::to_string(samples) +
                      " samples, needs at least n_fft = " + std::to_string(cfg.n_fft));
  }
  return 1 + (samples - cfg.n_fft) / cfg.hop;
}

Eigen::VectorXd hann_window(Index n) {
  Eigen::VectorXd w(n);
  for (Index i = 0; i < n; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                static_cast<double>(n));
  }
  return w;
}

Spectrogram stft(std::span<const float> samples, const StftConfig& cfg) {
  const Index frames = frame_count(static_cast<Index>(samples.size()), cfg);
  const Index bins = cfg.n_fft / 2 + 1;
  const Eigen::VectorXd window = hann_window(cfg.n_fft);

  Eigen::FFT<double> fft;
  std::vector<double> frame(static_cast<std::size_t>(cfg.n_fft));
  std::vector<std::complex<double>> spectrum;
  Spectrogram out(bins, frames);
  for (Index t = 0; t < frames; ++t) {
    const Index start = t * cfg.hop;
    for (Index i = 0; i < cfg.n_fft; ++i) {
      frame[static_cast<std::size_t>(i)] = samples[static_cast<std::size_t>(start + i)] * window[i];
    }
    fft.fwd(spectrum, frame);
    for (Index k = 0; k < bins; ++k) out(k, t) = spectrum[static_cast<std::size_t>(k)];
  }
  return out;
}

Spectrogram stft(const AudioClip& clip, const StftConfig& cfg) {
  return stft(std::span<const float>(clip.samples), cfg);
}

}  // namespace tcsk
