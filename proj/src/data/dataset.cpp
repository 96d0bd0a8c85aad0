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

#include "tcsk/data/dataset.hpp"

#include <bit>
#include <cstdio>
#include <cstdlib>
#include <limits>

#include "tcsk/features/audio.hpp"
#include "tcsk/features/feature_cache.hpp"
#include "tcsk/util/error.hpp"

namespace tcsk {

namespace {

struct Fnv1a {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  void add(std::string_view s) {
    for (unsigned char c : s) h = (h ^ c) * 0x100000001b3ULL;
    add_u64(s.size());
  }
  void add_u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) h = (h ^ ((v >> (8 * i)) & 0xff)) * 0x100000001b3ULL;
  }
};

std::string cache_key(const std::filesystem::path& wav, const MfccConfig& cfg) {
  namespace fs = std::filesystem;
  Fnv1a f;
  f.add(fs::weakly_canonical(wav).string());
  f.add_u64(fs::file_size(wav));
  f.add_u64(static_cast<std::uint64_t>(fs::last_write_time(wav).time_since_epoch().count()));
  f.add_u64(static_cast<std::uint64_t>(cfg.n_fft));
  f.add_u64(static_cast<std::uint64_t>(cfg.hop));
  f.add_u64(static_cast<std::uint64_t>(cfg.n_mels));
  f.add_u64(static_cast<std::uint64_t>(cfg.n_coeffs));
  f.add_u64(cfg.deltas ? 1 : 0);
  f.add_u64(std::bit_cast<std::uint64_t>(cfg.log_floor));
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(f.h));
  return std::string(buf) + ".tskf";
}

}  // namespace

std::optional<std::filesystem::path> resolve_cache_dir(const FeatureLoadOptions& opts) {
  if (opts.cache_dir) return opts.cache_dir;
  if (const char* env = std::getenv("FEATURE_CACHE_DIR"); env != nullptr && *env != '\0')
    return std::filesystem::path(env);
  return std::nullopt;
}

FeatureMap load_features(const Manifest& manifest, const ManifestEntry& entry,
                         const FeatureLoadOptions& opts) {
  const auto wav = manifest.resolve(entry);
  const auto dir = resolve_cache_dir(opts);
  std::filesystem::path cached;
  if (dir) {
    std::error_code ec;
    std::filesystem::create_directories(*dir, ec);
    if (ec) throw IoError("cannot create cache directory " + dir->string() + ": " + ec.message());
    cached = *dir / cache_key(wav, opts.mfcc);
    if (std::filesystem::is_regular_file(cached)) {
      auto c = read_feature_cache(cached);
      if (c.features.frame_hop == opts.mfcc.hop && c.features.frame_len == opts.mfcc.n_fft)
        return std::move(c.features);
    }
  }
  const AudioClip clip = read_wav(wav);
  FeatureMap fm = mfcc(clip, opts.mfcc);
  if (dir) {
    auto tmp = cached;
    tmp += ".tmp";
    write_feature_cache(tmp, fm, clip.sample_rate);
    std::filesystem::rename(tmp, cached);
  }
  return fm;
}

Dataset load_dataset(const Manifest& manifest, const FeatureLoadOptions& opts,
                     const std::optional<FeatureStats>& stats) {
  Dataset d;
  d.labels = manifest.labels;
  std::vector<FeatureMap> raw_train;
  std::vector<Index> train_labels;
  std::vector<FeatureMap> raw_test;
  std::vector<Index> test_labels;
  for (const auto& e : manifest.entries) {
    FeatureMap fm = load_features(manifest, e, opts);
    const auto label = static_cast<Index>(manifest.label_index(e.label));
    if (e.split == Split::train) {
      raw_train.push_back(std::move(fm));
      train_labels.push_back(label);
    } else {
      raw_test.push_back(std::move(fm));
      test_labels.push_back(label);
    }
  }
  if (stats) {
    d.stats = *stats;
  } else {
    if (raw_train.empty()) throw ConfigError("dataset: train split is empty");
    d.stats = compute_feature_stats(raw_train);
  }
  for (std::size_t i = 0; i < raw_train.size(); ++i)
    d.train.push_back({normalize(raw_train[i], d.stats), train_labels[i]});
  for (std::size_t i = 0; i < raw_test.size(); ++i)
    d.test.push_back({normalize(raw_test[i], d.stats), test_labels[i]});
  return d;
}

Eigen::MatrixXd clip_means(const std::vector<Example>& examples) {
  if (examples.empty()) return {};
  Eigen::MatrixXd out(examples.front().features.bins(), static_cast<Index>(examples.size()));
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const auto& fm = examples[i].features;
    if (fm.bins() != out.rows()) throw DimensionError("clip_means: inconsistent coefficient count");
    out.col(static_cast<Index>(i)) = fm.coeffs.matrix().cast<double>().rowwise().mean();
  }
  return out;
}

double nearest_centroid_accuracy(const Dataset& data) {
  if (data.train.empty() || data.test.empty())
    throw ConfigError("nearest_centroid_accuracy: both splits must be nonempty");
  const Eigen::MatrixXd train = clip_means(data.train);
  const Eigen::MatrixXd test = clip_means(data.test);
  const Index n = data.n_classes();
  Eigen::MatrixXd centroid = Eigen::MatrixXd::Zero(train.rows(), n);
  Eigen::VectorXd count = Eigen::VectorXd::Zero(n);
  for (std::size_t i = 0; i < data.train.size(); ++i) {
    centroid.col(data.train[i].label) += train.col(static_cast<Index>(i));
    count[data.train[i].label] += 1.0;
  }
  Index correct = 0;
  for (std::size_t i = 0; i < data.test.size(); ++i) {
    Index best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (Index k = 0; k < n; ++k) {
      if (count[k] == 0.0) continue;
      const double d = (test.col(static_cast<Index>(i)) - centroid.col(k) / count[k]).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = k;
      }
    }
    if (best == data.test[i].label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.test.size());
}

}  // namespace tcsk
