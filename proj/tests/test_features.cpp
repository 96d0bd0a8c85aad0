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

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numbers>

#include "tcsk/features/feature_cache.hpp"
#include "tcsk/features/mfcc.hpp"
#include "tcsk/numerics/rng.hpp"
#include "tcsk/util/error.hpp"
#include "test_util.hpp"

using namespace tcsk;

namespace {

AudioClip tone(double hz, Index samples, double amplitude = 1.0, int rate = 44100) {
  AudioClip clip;
  clip.sample_rate = rate;
  clip.samples.resize(static_cast<std::size_t>(samples));
  for (Index i = 0; i < samples; ++i) {
    clip.samples[static_cast<std::size_t>(i)] = static_cast<float>(
        amplitude * std::cos(2.0 * std::numbers::pi * hz * static_cast<double>(i) / rate));
  }
  return clip;
}

AudioClip noise(Index samples, std::uint64_t seed) {
  Rng rng(seed);
  AudioClip clip;
  clip.samples.resize(static_cast<std::size_t>(samples));
  for (auto& s : clip.samples) s = static_cast<float>(0.3 * rng.normal());
  return clip;
}

}  // namespace

TEST_CASE("stft of a bin-centred cosine peaks at that bin") {
  const AudioClip clip = tone(64.0 * 44100.0 / 1024.0, 1024 * 6);
  const Spectrogram s = stft(clip);
  CHECK(s.rows() == 513);
  for (Index t = 0; t < s.cols(); ++t) {
    const Eigen::VectorXd mag = s.col(t).cwiseAbs();
    Index peak = 0;
    mag.maxCoeff(&peak);
    CHECK(peak == 64);
    for (Index k = 0; k < mag.size(); ++k) {
      if (std::abs(k - 64) <= 1) continue;
      CHECK(20.0 * std::log10(mag[64] / std::max(mag[k], 1e-300)) >= 20.0);
    }
  }
}

TEST_CASE("stft of silence is zero") {
  AudioClip clip;
  clip.samples.assign(4096, 0.0f);
  CHECK(stft(clip).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("frame count") {
  CHECK(frame_count(441000) == 860);
  CHECK(frame_count(1024) == 1);
  CHECK_THROWS_WITH_AS(frame_count(1000), doctest::Contains("1024"), ConfigError);
  Rng rng(4);
  for (int i = 0; i < 200; ++i) {
    const Index n = rng.uniform_int(1024, 50000);
    Index frames = 0;
    for (Index start = 0; start + 1024 <= n; start += 512) ++frames;
    CHECK(frame_count(n) == frames);
  }
}

TEST_CASE("parseval holds per frame") {
  const AudioClip clip = noise(1024 * 4, 9);
  const Spectrogram s = stft(clip);
  const Eigen::VectorXd w = hann_window(1024);
  for (Index t = 0; t < s.cols(); ++t) {
    double time_energy = 0;
    for (Index i = 0; i < 1024; ++i) {
      const double v = clip.samples[static_cast<std::size_t>(t * 512 + i)] * w[i];
      time_energy += v * v;
    }
    // One-sided spectrum: interior bins stand for two conjugate bins.
    double freq_energy = std::norm(s(0, t)) + std::norm(s(512, t));
    for (Index k = 1; k < 512; ++k) freq_energy += 2.0 * std::norm(s(k, t));
    freq_energy /= 1024.0;
    CHECK(std::abs(freq_energy - time_energy) <= 1e-6 * time_energy);
  }
}

TEST_CASE("mel filterbank") {
  const Eigen::MatrixXd fb = mel_filterbank(40, 1024, 44100);
  CHECK(fb.rows() == 40);
  CHECK(fb.cols() == 513);
  for (Index m = 0; m < 40; ++m) CHECK(fb.row(m).sum() > 0.0);
  // Between the first and last centre the triangles sum to one.
  const double first = mel_to_hz(hz_to_mel(22050.0) / 41.0);
  const double last = mel_to_hz(hz_to_mel(22050.0) * 40.0 / 41.0);
  for (Index k = 0; k < 513; ++k) {
    const double f = k * 44100.0 / 1024.0;
    if (f >= first && f <= last) CHECK(std::abs(fb.col(k).sum() - 1.0) < 1e-6);
  }
}

TEST_CASE("dct is orthonormal") {
  const Eigen::MatrixXd d = dct_matrix(40, 40);
  CHECK((d * d.transpose() - Eigen::MatrixXd::Identity(40, 40)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("mfcc shapes and configuration errors") {
  const FeatureMap fm = mfcc(noise(441000, 1));
  CHECK(fm.coeffs.shape() == Shape{39, 860});
  CHECK(fm.frame_hop == 512);
  CHECK(fm.frame_len == 1024);
  CHECK(fm.coeffs.all_finite());

  MfccConfig bad;
  bad.n_mels = 20;
  CHECK_THROWS_AS(mfcc(noise(4096, 1), bad), ConfigError);

  MfccConfig with_deltas;
  with_deltas.deltas = true;
  CHECK(mfcc(noise(8192, 2), with_deltas).coeffs.shape() == Shape{39, 15});
}

TEST_CASE("mfcc is deterministic") {
  const AudioClip clip = noise(20000, 5);
  CHECK(mfcc(clip).coeffs == mfcc(clip).coeffs);
}

TEST_CASE("silence gives identical normalized frames") {
  AudioClip silence;
  silence.samples.assign(8192, 0.0f);
  const FeatureMap fm = mfcc(silence);
  const FeatureStats stats = compute_feature_stats(std::span<const FeatureMap>(&fm, 1));
  const FeatureMap n = normalize(fm, stats);
  const auto m = n.coeffs.matrix();
  for (Index t = 1; t < m.cols(); ++t) CHECK(m.col(t) == m.col(0));
}

TEST_CASE("tone and noise have different mean coefficients") {
  const FeatureMap a = mfcc(tone(1000.0, 44100, 0.5));
  const FeatureMap b = mfcc(noise(44100, 3));
  const Eigen::VectorXf ma = a.coeffs.matrix().rowwise().mean();
  const Eigen::VectorXf mb = b.coeffs.matrix().rowwise().mean();
  CHECK((ma - mb).norm() > 0.0f);
}

TEST_CASE("normalization statistics") {
  std::vector<FeatureMap> maps{mfcc(noise(10000, 1)), mfcc(noise(20000, 2))};
  const FeatureStats stats = compute_feature_stats(maps);
  Eigen::MatrixXf all(39, maps[0].frames() + maps[1].frames());
  all << maps[0].coeffs.matrix(), maps[1].coeffs.matrix();
  std::vector<FeatureMap> normalized{normalize(maps[0], stats), normalize(maps[1], stats)};
  Eigen::MatrixXf nall(39, all.cols());
  nall << normalized[0].coeffs.matrix(), normalized[1].coeffs.matrix();
  CHECK(nall.rowwise().mean().cwiseAbs().maxCoeff() < 1e-4f);
  const Eigen::VectorXf var = nall.array().square().rowwise().mean();
  CHECK((var.array() - 1.0f).abs().maxCoeff() < 1e-3f);
}

TEST_CASE("wav round trip at 16 and 24 bits") {
  testing::TempDir dir("wav");
  const AudioClip clip = tone(440.0, 2000, 0.7);
  for (int bits : {16, 24}) {
    const auto path = dir / ("tone" + std::to_string(bits) + ".wav");
    write_wav(path, clip, bits);
    const AudioClip back = read_wav(path);
    REQUIRE(back.samples.size() == clip.samples.size());
    CHECK(back.sample_rate == 44100);
    const double tol = bits == 16 ? 2.0 / 32767.0 : 2.0 / 8388607.0;
    for (std::size_t i = 0; i < clip.samples.size(); ++i) {
      CHECK(std::abs(back.samples[i] - clip.samples[i]) <= tol);
    }
  }
  CHECK_THROWS_AS(read_wav(dir / "missing.wav"), IoError);
  {
    std::ofstream junk(dir / "junk.wav", std::ios::binary);
    junk << "RIFF\x04\x00\x00\x00WAVX";
  }
  CHECK_THROWS_AS(read_wav(dir / "junk.wav"), FormatError);
}

TEST_CASE("feature cache round trip") {
  testing::TempDir dir("cache");
  const FeatureMap fm = mfcc(noise(6000, 7));
  write_feature_cache(dir / "a.feat", fm, 44100);
  const CachedFeatures back = read_feature_cache(dir / "a.feat");
  CHECK(back.sample_rate == 44100);
  CHECK(back.features.frame_hop == 512);
  CHECK(back.features.frame_len == 1024);
  CHECK(back.features.coeffs == fm.coeffs);

  const std::string bytes = testing::read_file(dir / "a.feat");
  {
    std::ofstream cut(dir / "cut.feat", std::ios::binary);
    cut << bytes.substr(0, bytes.size() / 2);
  }
  CHECK_THROWS_AS(read_feature_cache(dir / "cut.feat"), FormatError);
}
