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

#include "tcsk/features/mfcc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tcsk/util/error.hpp"

namespace tcsk {
namespace {

constexpr Index kStaticWithDeltas = 13;
constexpr Index kDeltaWindow = 2;
// Spreads below this (relative to the mean) are rounding noise, not signal.
constexpr float kMinStddev = 1e-5f;

// Regression deltas over +-kDeltaWindow frames with edge replication.
Eigen::MatrixXd deltas_of(const Eigen::MatrixXd& c) {
  const Index frames = c.cols();
  double norm = 0;
  for (Index n = 1; n <= kDeltaWindow; ++n) norm += 2.0 * static_cast<double>(n * n);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(c.rows(), frames);
  for (Index t = 0; t < frames; ++t) {
    for (Index n = 1; n <= kDeltaWindow; ++n) {
      const Index ahead = std::min(frames - 1, t + n);
      const Index behind = std::max<Index>(0, t - n);
      d.col(t) += static_cast<double>(n) * (c.col(ahead) - c.col(behind));
    }
  }
  return d / norm;
}

}  // namespace

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

Eigen::MatrixXd mel_filterbank(Index n_mels, Index n_fft, int sample_rate) {
  if (n_mels < 1) throw ConfigError("mel_filterbank: n_mels must be positive");
  const Index bins = n_fft / 2 + 1;
  const double nyquist = sample_rate / 2.0;
  const double mel_max = hz_to_mel(nyquist);
  std::vector<double> edges(static_cast<std::size_t>(n_mels + 2));
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edges[i] = mel_to_hz(mel_max * static_cast<double>(i) / static_cast<double>(n_mels + 1));
  }
  Eigen::MatrixXd fb = Eigen::MatrixXd::Zero(n_mels, bins);
  for (Index m = 0; m < n_mels; ++m) {
    const double lo = edges[static_cast<std::size_t>(m)];
    const double mid = edges[static_cast<std::size_t>(m + 1)];
    const double hi = edges[static_cast<std::size_t>(m + 2)];
    for (Index k = 0; k < bins; ++k) {
      const double f = static_cast<double>(k) * sample_rate / static_cast<double>(n_fft);
      if (f > lo && f < hi) fb(m, k) = f <= mid ? (f - lo) / (mid - lo) : (hi - f) / (hi - mid);
    }
  }
  return fb;
}

Eigen::MatrixXd dct_matrix(Index n_out, Index n_in) {
  Eigen::MatrixXd d(n_out, n_in);
  for (Index k = 0; k < n_out; ++k) {
    const double scale = std::sqrt((k == 0 ? 1.0 : 2.0) / static_cast<double>(n_in));
    for (Index m = 0; m < n_in; ++m) {
      d(k, m) = scale * std::cos(std::numbers::pi * static_cast<double>(k) *
                                 (static_cast<double>(m) + 0.5) / static_cast<double>(n_in));
    }
  }
  return d;
}

FeatureMap mfcc(const AudioClip& clip, const MfccConfig& cfg) {
  const Index statics = cfg.deltas ? kStaticWithDeltas : cfg.n_coeffs;
  if (cfg.deltas && cfg.n_coeffs != 3 * kStaticWithDeltas) {
    throw ConfigError("mfcc: deltas mode produces 39 rows, n_coeffs must be 39");
  }
  if (statics > cfg.n_mels) {
    throw ConfigError("mfcc: " + std::to_string(statics) + " cepstral coefficients exceed " +
                      std::to_string(cfg.n_mels) + " mel bands");
  }
  if (clip.sample_rate <= 0 || clip.samples.empty()) {
    throw ConfigError("mfcc: clip needs a positive sample rate and samples");
  }
  const Spectrogram spec = stft(clip, {cfg.n_fft, cfg.hop});
  const Eigen::MatrixXd fb = mel_filterbank(cfg.n_mels, cfg.n_fft, clip.sample_rate);
  const Eigen::MatrixXd dct = dct_matrix(statics, cfg.n_mels);
  // Frame by frame so identical frames give bitwise identical coefficients.
  Eigen::MatrixXd cep(statics, spec.cols());
  for (Index t = 0; t < spec.cols(); ++t) {
    const Eigen::VectorXd power = spec.col(t).cwiseAbs2();
    const Eigen::VectorXd mel = fb * power;
    cep.col(t) = dct * mel.array().max(cfg.log_floor).log().matrix();
  }
  if (cfg.deltas) {
    const Eigen::MatrixXd d1 = deltas_of(cep);
    const Eigen::MatrixXd d2 = deltas_of(d1);
    Eigen::MatrixXd stacked(3 * statics, cep.cols());
    stacked << cep, d1, d2;
    cep = std::move(stacked);
  }

  FeatureMap fm;
  fm.frame_hop = cfg.hop;
  fm.frame_len = cfg.n_fft;
  fm.coeffs = Tensor<float>({cep.rows(), cep.cols()});
  fm.coeffs.matrix() = cep.cast<float>();
  return fm;
}

FeatureStats compute_feature_stats(std::span<const FeatureMap> maps) {
  if (maps.empty()) throw ConfigError("compute_feature_stats: no feature maps");
  const Index rows = maps.front().bins();
  Eigen::VectorXd total = Eigen::VectorXd::Zero(rows);
  Eigen::VectorXd total_sq = Eigen::VectorXd::Zero(rows);
  double count = 0;
  for (const auto& fm : maps) {
    if (fm.bins() != rows) throw DimensionError("compute_feature_stats: mixed coefficient counts");
    const Eigen::MatrixXd m = fm.coeffs.matrix().cast<double>();
    total += m.rowwise().sum();
    count += static_cast<double>(m.cols());
  }
  const Eigen::VectorXd mean = total / count;
  for (const auto& fm : maps) {
    const Eigen::MatrixXd m = fm.coeffs.matrix().cast<double>();
    total_sq += (m.colwise() - mean).array().square().rowwise().sum().matrix();
  }
  FeatureStats stats;
  stats.mean = mean.cast<float>();
  stats.stddev = (total_sq / count).cwiseSqrt().cast<float>();
  return stats;
}

FeatureMap normalize(const FeatureMap& fm, const FeatureStats& stats) {
  if (stats.mean.size() != fm.bins()) {
    throw DimensionError("normalize: statistics cover " + std::to_string(stats.mean.size()) +
                         " coefficients, feature map has " + std::to_string(fm.bins()));
  }
  FeatureMap out = fm;
  auto m = out.coeffs.matrix();
  for (Index r = 0; r < m.rows(); ++r) {
    const float sd = stats.stddev[r];
    m.row(r).array() -= stats.mean[r];
    if (sd > kMinStddev * std::max(1.0f, std::abs(stats.mean[r]))) m.row(r) /= sd;
  }
  return out;
}

FeatureMap crop_frames(const FeatureMap& fm, Index frames) {
  if (frames < 1 || frames > fm.frames()) {
    throw DimensionError("crop_frames: cannot keep " + std::to_string(frames) + " of " +
                         std::to_string(fm.frames()) + " frames");
  }
  if (frames == fm.frames()) return fm;
  FeatureMap out = fm;
  out.coeffs = Tensor<float>({fm.bins(), frames});
  out.coeffs.matrix() = fm.coeffs.matrix().leftCols(frames);
  return out;
}

}  // namespace tcsk
