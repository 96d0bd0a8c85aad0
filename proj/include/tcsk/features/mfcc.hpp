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

#include <span>

#include "tcsk/features/audio.hpp"
#include "tcsk/features/stft.hpp"
#include "tcsk/numerics/tensor.hpp"

namespace tcsk {

/// MFCC spectrogram: coefficients on rows, frames on columns.
struct FeatureMap {
  Tensor<float> coeffs;
  Index frame_hop = 512;
  Index frame_len = 1024;

  Index bins() const { return coeffs.shape()[0]; }
  Index frames() const { return coeffs.shape()[1]; }
};

struct MfccConfig {
  Index n_fft = 1024;
  Index hop = 512;
  Index n_mels = 40;
  Index n_coeffs = 39;
  /// 13 static coefficients plus first and second differences instead of 39 statics.
  bool deltas = false;
  double log_floor = 1e-10;
};

inline constexpr Index kFeatureBins = 39;

/// HTK mel scale.
double hz_to_mel(double hz);
double mel_to_hz(double mel);

/// Triangular filters with unit peaks, centers equally spaced in mel from 0 Hz to
/// Nyquist. Shape [n_mels, n_fft/2 + 1].
Eigen::MatrixXd mel_filterbank(Index n_mels, Index n_fft, int sample_rate);

/// Orthonormal DCT-II matrix [n_out, n_in].
Eigen::MatrixXd dct_matrix(Index n_out, Index n_in);

/// Raw (unnormalized) MFCC feature map.
FeatureMap mfcc(const AudioClip& clip, const MfccConfig& cfg = {});

/// Per-coefficient statistics of a training split.
struct FeatureStats {
  Eigen::VectorXf mean;
  Eigen::VectorXf stddev;

  bool empty() const { return mean.size() == 0; }
};

/// Mean and standard deviation per coefficient pooled over every frame of every map.
FeatureStats compute_feature_stats(std::span<const FeatureMap> maps);

/// (x - mean) / stddev per coefficient; zero-variance coefficients are only centered.
FeatureMap normalize(const FeatureMap& fm, const FeatureStats& stats);

/// The first `frames` frames of `fm`.
FeatureMap crop_frames(const FeatureMap& fm, Index frames);

}  // namespace tcsk
