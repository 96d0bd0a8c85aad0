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

#include "tcsk/cli/run_config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>

#include "tcsk/train/trainer.hpp"
#include "tcsk/util/error.hpp"
#include "tcsk/util/flat_config.hpp"

namespace tcsk {

void RunConfig::validate() const {
  model.validate();
  train.validate();
  train.augmentation.specmask.validate();
  if (features.n_coeffs != model.in_channels)
    throw ConfigError("features.n_coeffs (" + std::to_string(features.n_coeffs) +
                      ") must equal model.in_channels (" + std::to_string(model.in_channels) + ")");
  if (features.n_fft < 2 || features.hop < 1 || features.n_mels < 1)
    throw ConfigError("features: n_fft >= 2, hop >= 1 and n_mels >= 1 are required");
  if (!features.deltas && features.n_coeffs > features.n_mels)
    throw ConfigError("features.n_coeffs must not exceed features.n_mels");
  if (features.deltas && features.n_coeffs != 39)
    throw ConfigError("features.deltas requires n_coeffs = 39");
  if (search.trials < 1) throw ConfigError("search.trials must be >= 1");
  if (search.epochs < 1) throw ConfigError("search.epochs must be >= 1");
  search.tpe.validate();
}

namespace {

Index as_index(const FlatConfig& f, const std::string& s, const std::string& k, Index fallback) {
  return f.has(s, k) ? static_cast<Index>(f.integer(s, k)) : fallback;
}

double as_number(const FlatConfig& f, const std::string& s, const std::string& k, double fallback) {
  return f.number_or(s, k, fallback);
}

bool as_bool(const FlatConfig& f, const std::string& s, const std::string& k, bool fallback) {
  return f.has(s, k) ? f.boolean(s, k) : fallback;
}

WeightDecayMode parse_decay_mode(const std::string& name) {
  if (name == "decoupled") return WeightDecayMode::decoupled;
  if (name == "l2") return WeightDecayMode::l2;
  throw ConfigError("train.weight_decay_mode must be \"decoupled\" or \"l2\", got \"" + name + "\"");
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s = buf;
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

}  // namespace

RunConfig parse_run_config(std::string_view text, const std::string& source) {
  const FlatConfig f = FlatConfig::parse(text, source);
  f.require_sections({"model", "train", "gridmask", "augment", "specmask", "features", "search"});
  f.require_known("model", {"in_channels", "c_channels", "l_size", "p_size", "dropout",
                            "n_classes", "separable"});
  f.require_known("train", {"learning_rate", "weight_decay", "weight_decay_mode", "decay_factor",
                            "decay_interval", "batch_size", "epochs", "seed"});
  f.require_known("gridmask", {"p", "mr", "d_min", "d_max"});
  f.require_known("augment", {"policy", "mixup_alpha"});
  f.require_known("specmask", {"time_masks", "max_time_width", "freq_masks", "max_freq_width"});
  f.require_known("features", {"n_fft", "hop", "n_mels", "n_coeffs", "deltas", "log_floor"});
  f.require_known("search", {"trials", "epochs", "gamma", "n_startup", "n_candidates",
                             "bandwidth_floor", "prior_weight"});

  RunConfig c;
  auto& m = c.model;
  m.in_channels = as_index(f, "model", "in_channels", m.in_channels);
  m.c_channels = as_index(f, "model", "c_channels", m.c_channels);
  m.l_size = as_index(f, "model", "l_size", m.l_size);
  m.p_size = as_index(f, "model", "p_size", m.p_size);
  m.dropout = as_number(f, "model", "dropout", m.dropout);
  m.n_classes = as_index(f, "model", "n_classes", m.n_classes);
  m.separable = as_bool(f, "model", "separable", m.separable);

  auto& t = c.train;
  t.lr0 = as_number(f, "train", "learning_rate", t.lr0);
  t.weight_decay = as_number(f, "train", "weight_decay", t.weight_decay);
  if (f.has("train", "weight_decay_mode"))
    t.weight_decay_mode = parse_decay_mode(f.string("train", "weight_decay_mode"));
  t.decay_factor = as_number(f, "train", "decay_factor", t.decay_factor);
  t.decay_interval = as_index(f, "train", "decay_interval", t.decay_interval);
  t.batch_size = as_index(f, "train", "batch_size", t.batch_size);
  t.epochs = as_index(f, "train", "epochs", t.epochs);
  if (f.has("train", "seed")) {
    const long long seed = f.integer("train", "seed");
    if (seed < 0) throw ConfigError(source + ": train.seed must be >= 0");
    t.seed = static_cast<std::uint64_t>(seed);
  }

  auto& a = t.augmentation;
  if (f.has("augment", "policy")) a.policy = parse_augment_policy(f.string("augment", "policy"));
  a.mixup.alpha = as_number(f, "augment", "mixup_alpha", a.mixup.alpha);
  a.gridmask.p = as_number(f, "gridmask", "p", a.gridmask.p);
  a.gridmask.mr = as_number(f, "gridmask", "mr", a.gridmask.mr);
  a.gridmask.d_min = as_index(f, "gridmask", "d_min", a.gridmask.d_min);
  a.gridmask.d_max = as_index(f, "gridmask", "d_max", a.gridmask.d_max);
  a.specmask.n_time_masks = as_index(f, "specmask", "time_masks", a.specmask.n_time_masks);
  a.specmask.max_time_width = as_index(f, "specmask", "max_time_width", a.specmask.max_time_width);
  a.specmask.n_freq_masks = as_index(f, "specmask", "freq_masks", a.specmask.n_freq_masks);
  a.specmask.max_freq_width = as_index(f, "specmask", "max_freq_width", a.specmask.max_freq_width);

  auto& fe = c.features;
  fe.n_fft = as_index(f, "features", "n_fft", fe.n_fft);
  fe.hop = as_index(f, "features", "hop", fe.hop);
  fe.n_mels = as_index(f, "features", "n_mels", fe.n_mels);
  fe.n_coeffs = as_index(f, "features", "n_coeffs", fe.n_coeffs);
  fe.deltas = as_bool(f, "features", "deltas", fe.deltas);
  fe.log_floor = as_number(f, "features", "log_floor", fe.log_floor);

  auto& s = c.search;
  s.trials = as_index(f, "search", "trials", s.trials);
  s.epochs = as_index(f, "search", "epochs", s.epochs);
  s.tpe.gamma = as_number(f, "search", "gamma", s.tpe.gamma);
  s.tpe.n_startup = as_index(f, "search", "n_startup", s.tpe.n_startup);
  s.tpe.n_candidates = as_index(f, "search", "n_candidates", s.tpe.n_candidates);
  s.tpe.bandwidth_floor = as_number(f, "search", "bandwidth_floor", s.tpe.bandwidth_floor);
  s.tpe.prior_weight = as_number(f, "search", "prior_weight", s.tpe.prior_weight);

  try {
    c.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_run_config(text, path.string());
}

std::string to_toml(const RunConfig& c) {
  const auto& m = c.model;
  const auto& t = c.train;
  const auto& a = t.augmentation;
  const auto& fe = c.features;
  const auto& s = c.search;
  auto b = [](bool v) { return v ? "true" : "false"; };
  std::string out;
  auto line = [&](const std::string& key, const std::string& value) {
    out += key + " = " + value + "\n";
  };
  auto i = [](Index v) { return std::to_string(v); };
  out += "[model]\n";
  line("in_channels", i(m.in_channels));
  line("c_channels", i(m.c_channels));
  line("l_size", i(m.l_size));
  line("p_size", i(m.p_size));
  line("dropout", fmt(m.dropout));
  line("n_classes", i(m.n_classes));
  line("separable", b(m.separable));
  out += "\n[train]\n";
  line("learning_rate", fmt(t.lr0));
  line("weight_decay", fmt(t.weight_decay));
  line("weight_decay_mode",
       t.weight_decay_mode == WeightDecayMode::decoupled ? "\"decoupled\"" : "\"l2\"");
  line("decay_factor", fmt(t.decay_factor));
  line("decay_interval", i(t.decay_interval));
  line("batch_size", i(t.batch_size));
  line("epochs", i(t.epochs));
  line("seed", std::to_string(t.seed));
  out += "\n[gridmask]\n";
  line("p", fmt(a.gridmask.p));
  line("mr", fmt(a.gridmask.mr));
  line("d_min", i(a.gridmask.d_min));
  line("d_max", i(a.gridmask.d_max));
  out += "\n[augment]\n";
  line("policy", "\"" + to_string(a.policy) + "\"");
  line("mixup_alpha", fmt(a.mixup.alpha));
  out += "\n[specmask]\n";
  line("time_masks", i(a.specmask.n_time_masks));
  line("max_time_width", i(a.specmask.max_time_width));
  line("freq_masks", i(a.specmask.n_freq_masks));
  line("max_freq_width", i(a.specmask.max_freq_width));
  out += "\n[features]\n";
  line("n_fft", i(fe.n_fft));
  line("hop", i(fe.hop));
  line("n_mels", i(fe.n_mels));
  line("n_coeffs", i(fe.n_coeffs));
  line("deltas", b(fe.deltas));
  line("log_floor", fmt(fe.log_floor));
  out += "\n[search]\n";
  line("trials", i(s.trials));
  line("epochs", i(s.epochs));
  line("gamma", fmt(s.tpe.gamma));
  line("n_startup", i(s.tpe.n_startup));
  line("n_candidates", i(s.tpe.n_candidates));
  line("bandwidth_floor", fmt(s.tpe.bandwidth_floor));
  line("prior_weight", fmt(s.tpe.prior_weight));
  return out;
}

RunConfig apply_params(RunConfig cfg, const ParamConfig& params) {
  auto integral = [](const std::string& name, double v) {
    if (v != std::round(v)) throw ConfigError("parameter " + name + " must be integral");
    return static_cast<Index>(v);
  };
  for (const auto& [name, v] : params) {
    if (name == "learning_rate") cfg.train.lr0 = v;
    else if (name == "batch_size") cfg.train.batch_size = integral(name, v);
    else if (name == "l_size") cfg.model.l_size = integral(name, v);
    else if (name == "c_channels") cfg.model.c_channels = integral(name, v);
    else if (name == "p_size") cfg.model.p_size = integral(name, v);
    else if (name == "dropout") cfg.model.dropout = v;
    else if (name == "p") cfg.train.augmentation.gridmask.p = v;
    else if (name == "mr") cfg.train.augmentation.gridmask.mr = v;
    else throw ConfigError("unknown search parameter '" + name + "'");
  }
  cfg.validate();
  return cfg;
}

Evaluator training_evaluator(const Dataset& data, const RunConfig& base) {
  return [&data, base](const ParamConfig& params, std::uint64_t seed) {
    RunConfig cfg = apply_params(base, params);
    cfg.model.n_classes = data.n_classes();
    cfg.train.epochs = cfg.search.epochs;
    cfg.train.seed = seed;
    cfg.train.timing = false;
    Rng init = Rng(seed).fork(0);
    TcskNet<float> net = TcskNet<float>::initialized(cfg.model, init);
    return train(net, data, cfg.train).best_val_acc;
  };
}

}  // namespace tcsk
