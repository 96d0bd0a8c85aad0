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

#include "tcsk/automl/tpe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "tcsk/util/error.hpp"

namespace tcsk {
namespace {

constexpr int kMaxRejections = 64;

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

// Mixture of Gaussians centred on `points`, truncated to [low, high], plus the
// uniform prior with the weight of `prior_weight` observations.
class TruncatedKde {
 public:
  TruncatedKde(std::vector<double> points, const ParamSpec& spec, double floor_fraction,
               double prior_weight)
      : points_(std::move(points)), low_(spec.low), high_(spec.high), prior_(prior_weight) {
    const double range = high_ - low_;
    const double n = static_cast<double>(points_.size());
    double sigma = 0.0;
    if (points_.size() > 1) {
      const double mean = std::accumulate(points_.begin(), points_.end(), 0.0) / n;
      double ss = 0.0;
      for (double p : points_) ss += (p - mean) * (p - mean);
      sigma = std::sqrt(ss / (n - 1.0)) * std::pow(n, -0.2);
    }
    // The adaptive floor range / (1 + n) keeps a small, tight good set exploring.
    sigma_ = std::max(sigma, range * std::max(floor_fraction, 1.0 / (1.0 + n)));
    for (double p : points_) {
      mass_.push_back(normal_cdf((high_ - p) / sigma_) - normal_cdf((low_ - p) / sigma_));
    }
  }

  double log_density(double x) const {
    if (points_.empty()) return -std::log(high_ - low_);
    double total = prior_ / (high_ - low_);
    for (std::size_t i = 0; i < points_.size(); ++i) {
      const double z = (x - points_[i]) / sigma_;
      total += std::exp(-0.5 * z * z) / (sigma_ * std::sqrt(2.0 * std::numbers::pi) * mass_[i]);
    }
    total /= static_cast<double>(points_.size()) + prior_;
    return std::log(std::max(total, std::numeric_limits<double>::min()));
  }

  double sample(Rng& rng) const {
    const double n = static_cast<double>(points_.size());
    if (points_.empty() || rng.uniform() * (n + prior_) >= n) return rng.uniform(low_, high_);
    const double centre = points_[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(points_.size()) - 1))];
    for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
      const double x = centre + sigma_ * rng.normal();
      if (x >= low_ && x <= high_) return x;
    }
    return std::clamp(centre, low_, high_);
  }

 private:
  std::vector<double> points_;
  double low_, high_;
  double prior_;
  double sigma_ = 1.0;
  std::vector<double> mass_;
};

// Smoothed member frequencies.
class Categorical {
 public:
  Categorical(const std::vector<double>& observed, const ParamSpec& spec)
      : spec_(&spec), weights_(spec.values.size(), 1.0) {
    for (double v : observed) {
      const int idx = spec.index_of(v);
      if (idx >= 0) weights_[static_cast<std::size_t>(idx)] += 1.0;
    }
    total_ = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  }

  double log_density(double x) const {
    const int idx = spec_->index_of(x);
    return std::log(weights_[static_cast<std::size_t>(idx)] / total_);
  }

  double sample(Rng& rng) const {
    double u = rng.uniform() * total_;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
      if (u < weights_[i]) return spec_->values[i];
      u -= weights_[i];
    }
    return spec_->values.back();
  }

 private:
  const ParamSpec* spec_;
  std::vector<double> weights_;
  double total_ = 0.0;
};

struct Density {
  std::vector<TruncatedKde> kde;
  std::vector<Categorical> cat;
};

}  // namespace

void TpeConfig::validate() const {
  if (!(gamma > 0.0 && gamma < 1.0)) throw ConfigError("tpe: gamma must lie in (0, 1)");
  if (n_startup < 1) throw ConfigError("tpe: n_startup must be >= 1");
  if (n_candidates < 1) throw ConfigError("tpe: n_candidates must be >= 1");
  if (!(bandwidth_floor > 0.0)) throw ConfigError("tpe: bandwidth_floor must be positive");
  if (!(prior_weight >= 0.0)) throw ConfigError("tpe: prior_weight must be non-negative");
}

ParamConfig tpe_suggest(std::span<const Trial> history, const SearchSpace& space,
                        const TpeConfig& cfg, Rng& rng) {
  space.validate();
  cfg.validate();
  std::vector<const Trial*> done;
  for (const auto& t : history) {
    if (t.status == TrialStatus::complete && std::isfinite(t.objective) && space.contains(t.config)) {
      done.push_back(&t);
    }
  }
  if (static_cast<Index>(done.size()) < cfg.n_startup) return sample_prior(space, rng);

  std::stable_sort(done.begin(), done.end(),
                   [](const Trial* a, const Trial* b) { return a->objective > b->objective; });
  const std::size_t n_good = std::min(
      done.size(),
      std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(cfg.gamma * done.size()))));

  // Per-parameter densities for the good (l) and remaining (g) trials.
  Density good, bad;
  for (const auto& spec : space.specs) {
    std::vector<double> g_vals, b_vals;
    for (std::size_t i = 0; i < done.size(); ++i) {
      (i < n_good ? g_vals : b_vals).push_back(done[i]->config.at(spec.name));
    }
    if (spec.kind == ParamKind::choice) {
      good.cat.emplace_back(g_vals, spec);
      bad.cat.emplace_back(b_vals, spec);
    } else {
      good.kde.emplace_back(g_vals, spec, cfg.bandwidth_floor, cfg.prior_weight);
      bad.kde.emplace_back(b_vals, spec, cfg.bandwidth_floor, cfg.prior_weight);
    }
  }

  ParamConfig best;
  double best_score = -std::numeric_limits<double>::infinity();
  for (Index c = 0; c < cfg.n_candidates; ++c) {
    ParamConfig candidate;
    double score = 0.0;
    std::size_t k = 0, j = 0;
    for (const auto& spec : space.specs) {
      double x = 0.0;
      if (spec.kind == ParamKind::choice) {
        x = good.cat[j].sample(rng);
        score += good.cat[j].log_density(x) - bad.cat[j].log_density(x);
        ++j;
      } else {
        x = good.kde[k].sample(rng);
        score += good.kde[k].log_density(x) - bad.kde[k].log_density(x);
        ++k;
      }
      candidate[spec.name] = x;
    }
    if (c == 0 || score > best_score) {
      best_score = score;
      best = std::move(candidate);
    }
  }
  return best;
}

}  // namespace tcsk
