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

#include "tcsk/data/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "tcsk/features/audio.hpp"
#include "tcsk/numerics/rng.hpp"
#include "tcsk/util/error.hpp"

namespace tcsk {

void SyntheticSpec::validate() const {
  if (n_classes < 1) throw ConfigError("synthetic: n_classes must be >= 1");
  if (clips_per_class < 1) throw ConfigError("synthetic: clips_per_class must be >= 1");
  if (!(duration_s > 0.0)) throw ConfigError("synthetic: duration_s must be > 0");
  if (sample_rate < 1) throw ConfigError("synthetic: sample_rate must be >= 1");
  if (!(train_fraction >= 0.0 && train_fraction <= 1.0))
    throw ConfigError("synthetic: train_fraction must be in [0, 1]");
  if (synthetic_tone_hz(n_classes - 1) >= sample_rate / 2.0)
    throw ConfigError("synthetic: highest tone is above the Nyquist frequency");
}

std::string synthetic_label(Index k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "tone_%02lld", static_cast<long long>(k));
  return buf;
}

std::vector<float> synthetic_clip(const SyntheticSpec& spec, Index k, Index clip) {
  Rng rng = Rng(spec.seed).fork(static_cast<std::uint64_t>(k)).fork(static_cast<std::uint64_t>(clip));
  const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double gain_db = rng.uniform(-3.0, 3.0);
  const double amplitude = 0.25 * std::pow(10.0, gain_db / 20.0);
  const double noise_sd = std::sqrt(amplitude * amplitude / 2.0 / std::pow(10.0, spec.snr_db / 10.0));
  const double omega = 2.0 * std::numbers::pi * synthetic_tone_hz(k) / spec.sample_rate;
  const auto n = static_cast<std::size_t>(std::llround(spec.duration_s * spec.sample_rate));
  std::vector<float> samples(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = amplitude * std::sin(omega * static_cast<double>(i) + phase) + noise_sd * rng.normal();
    samples[i] = static_cast<float>(std::clamp(s, -1.0, 1.0));
  }
  return samples;
}

Manifest generate_synthetic(const SyntheticSpec& spec, const std::filesystem::path& out_dir) {
  spec.validate();
  const auto audio_dir = out_dir / "audio";
  std::error_code ec;
  std::filesystem::create_directories(audio_dir, ec);
  if (ec) throw IoError("cannot create " + audio_dir.string() + ": " + ec.message());

  const auto n_train = static_cast<Index>(std::llround(spec.train_fraction * spec.clips_per_class));
  Manifest m;
  m.root = out_dir;
  for (Index k = 0; k < spec.n_classes; ++k) {
    m.labels.push_back(synthetic_label(k));
    for (Index c = 0; c < spec.clips_per_class; ++c) {
      char name[64];
      std::snprintf(name, sizeof name, "%s_%03lld.wav", synthetic_label(k).c_str(),
                    static_cast<long long>(c));
      AudioClip clip{synthetic_clip(spec, k, c), spec.sample_rate};
      write_wav(audio_dir / name, clip, 16);
      m.entries.push_back({std::string("audio/") + name, synthetic_label(k), "synthetic",
                           c < n_train ? Split::train : Split::test});
    }
  }
  write_manifest(out_dir / "manifest.csv", m.entries);
  return m;
}

}  // namespace tcsk
