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

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "tcsk/augment/grid_mask.hpp"
#include "tcsk/augment/pgm.hpp"
#include "tcsk/automl/search.hpp"
#include "tcsk/automl/trial_store.hpp"
#include "tcsk/cli/run_config.hpp"
#include "tcsk/data/dataset.hpp"
#include "tcsk/data/synthetic.hpp"
#include "tcsk/model/checkpoint.hpp"
#include "tcsk/train/evaluate.hpp"
#include "tcsk/train/trainer.hpp"
#include "tcsk/util/error.hpp"

namespace fs = std::filesystem;
using namespace tcsk;

namespace {

struct Flags {
  std::string manifest;
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<Index> trials;
  std::optional<Index> epochs;
  std::string out;
  bool timing = false;
  std::string cache_dir;
  std::string checkpoint;
  std::string split = "test";
  std::string space;
  std::string policy;
  Index clips_per_class = 20;
  Index classes = 10;
  double duration = 2.0;
  Index count = 4;
  Index frames = 860;
};

RunConfig run_config(const Flags& f) {
  RunConfig cfg = f.config.empty() ? RunConfig{} : load_run_config(f.config);
  if (f.seed) cfg.train.seed = *f.seed;
  if (!f.policy.empty()) cfg.train.augmentation.policy = parse_augment_policy(f.policy);
  cfg.validate();
  return cfg;
}

FeatureLoadOptions feature_options(const Flags& f, const RunConfig& cfg) {
  FeatureLoadOptions opts;
  opts.mfcc = cfg.features;
  if (!f.cache_dir.empty()) opts.cache_dir = fs::path(f.cache_dir);
  return opts;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

bool uses_gridmask(AugmentPolicy p) {
  return p == AugmentPolicy::gridmask || p == AugmentPolicy::gridmask_then_mixup ||
         p == AugmentPolicy::mixup_then_gridmask;
}

void warn_gridmask_clamp(const RunConfig& cfg, Index frames) {
  const auto& gm = cfg.train.augmentation.gridmask;
  if (!uses_gridmask(cfg.train.augmentation.policy)) return;
  if (grid_mask_clamps(cfg.model.in_channels, frames, gm))
    std::cerr << "warning[gridmask-clamp]: d_max=" << gm.d_max << " exceeds a " << cfg.model.in_channels
              << "x" << frames << " feature map; grid periods are clamped per axis\n";
}

Index shortest(const std::vector<Example>& xs) {
  Index t = std::numeric_limits<Index>::max();
  for (const auto& x : xs) t = std::min(t, x.features.frames());
  return t;
}

Dataset load_for_training(const Flags& f, RunConfig& cfg) {
  const Manifest manifest = load_manifest(f.manifest);
  Dataset data = load_dataset(manifest, feature_options(f, cfg));
  cfg.model.n_classes = data.n_classes();
  cfg.validate();
  if (!data.train.empty()) warn_gridmask_clamp(cfg, shortest(data.train));
  return data;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

int cmd_gen_data(const Flags& f) {
  SyntheticSpec spec;
  spec.n_classes = f.classes;
  spec.clips_per_class = f.clips_per_class;
  spec.duration_s = f.duration;
  spec.seed = f.seed.value_or(0);
  const Manifest m = generate_synthetic(spec, f.out);
  std::cout << m.entries.size() << " clips written to " << (fs::path(f.out) / "manifest.csv").string()
            << "\n";
  return 0;
}

int cmd_extract_features(const Flags& f) {
  const RunConfig cfg = run_config(f);
  const Manifest manifest = load_manifest(f.manifest);
  FeatureLoadOptions opts = feature_options(f, cfg);
  opts.cache_dir = fs::path(f.out);
  for (const auto& e : manifest.entries) load_features(manifest, e, opts);
  std::cout << manifest.entries.size() << " feature maps cached in " << f.out << "\n";
  return 0;
}

int cmd_train(const Flags& f) {
  RunConfig cfg = run_config(f);
  if (f.epochs) cfg.train.epochs = *f.epochs;
  cfg.train.timing = f.timing;
  cfg.validate();
  const Dataset data = load_for_training(f, cfg);
  const fs::path out = f.out;
  ensure_dir(out);
  write_text(out / "config.toml", to_toml(cfg));

  Rng init = Rng(cfg.train.seed).fork(0);
  TcskNet<float> net = TcskNet<float>::initialized(cfg.model, init);
  TrainOutputs outputs;
  outputs.checkpoint = out / "checkpoint.tskn";
  outputs.report_csv = out / "report.csv";
  outputs.on_epoch = [](const EpochRecord& r) {
    std::cerr << "epoch " << r.epoch << " lr=" << r.lr << " train_loss=" << r.train_loss
              << " val_acc=" << r.val_acc << "\n";
  };
  const TrainReport report = train(net, data, cfg.train, outputs);
  std::cout << "best_val_acc " << format_double(report.best_val_acc) << " epoch "
            << report.best_epoch << "\n";
  return 0;
}

int cmd_eval(const Flags& f) {
  const RunConfig cfg = run_config(f);
  Checkpoint ck = load_checkpoint(f.checkpoint);
  const Manifest manifest = load_manifest(f.manifest, ck.labels);
  const Dataset data = load_dataset(manifest, feature_options(f, cfg), ck.stats);
  const auto& split = f.split == "train" ? data.train : data.test;
  if (split.empty()) throw ConfigError("the " + f.split + " split of the manifest is empty");
  const EvalResult r = evaluate(ck.net, split);

  std::string text = "accuracy " + format_double(r.accuracy) + "\n";
  std::string csv = "true\\pred";
  for (const auto& l : ck.labels) csv += "," + l;
  csv += "\n";
  for (Index i = 0; i < r.confusion.rows(); ++i) {
    text += ck.labels[static_cast<std::size_t>(i)];
    csv += ck.labels[static_cast<std::size_t>(i)];
    for (Index j = 0; j < r.confusion.cols(); ++j) {
      text += " " + std::to_string(r.confusion(i, j));
      csv += "," + std::to_string(r.confusion(i, j));
    }
    text += "\n";
    csv += "\n";
  }
  std::cout << text;
  if (!f.out.empty()) {
    ensure_dir(f.out);
    write_text(fs::path(f.out) / "eval.txt", text);
    write_text(fs::path(f.out) / "confusion.csv", csv);
  }
  return 0;
}

int run_stage(const Flags& f, bool gridmask_stage) {
  RunConfig cfg = run_config(f);
  if (f.trials) cfg.search.trials = *f.trials;
  if (f.epochs) cfg.search.epochs = *f.epochs;
  if (gridmask_stage && !uses_gridmask(cfg.train.augmentation.policy))
    cfg.train.augmentation.policy = AugmentPolicy::gridmask;
  cfg.validate();
  const SearchSpace space = !f.space.empty() ? load_search_space(f.space)
                            : gridmask_stage ? gridmask_search_space()
                                             : model_search_space();
  const Dataset data = load_for_training(f, cfg);
  const fs::path out = f.out;
  ensure_dir(out);
  const std::string stage = gridmask_stage ? "gridmask" : "model";
  const TrialStore store(out / ("trials_" + stage + ".jsonl"));

  SearchOptions opts;
  opts.n_trials = cfg.search.trials;
  opts.seed = cfg.train.seed;
  opts.tpe = cfg.search.tpe;
  opts.timing = f.timing;
  opts.on_trial = [](const Trial& t) {
    std::cerr << "trial " << t.trial_id << " " << to_string(t.status);
    if (t.status == TrialStatus::complete) std::cerr << " objective=" << t.objective;
    std::cerr << "\n";
  };
  const Trial best = run_search(space, training_evaluator(data, cfg), opts, &store);
  RunConfig tuned = apply_params(cfg, best.config);
  write_text(out / ("best_" + stage + ".toml"), to_toml(tuned));
  std::cout << "best trial " << best.trial_id << " objective "
            << format_double(best.objective) << "\n";
  for (const auto& [name, v] : best.config) std::cout << name << " = " << v << "\n";
  return 0;
}

int cmd_preview_mask(const Flags& f) {
  const RunConfig cfg = run_config(f);
  const fs::path out = f.out;
  ensure_dir(out);
  const GridMaskConfig& gm = cfg.train.augmentation.gridmask;
  const Index bins = cfg.model.in_channels;
  if (grid_mask_clamps(bins, f.frames, gm))
    std::cerr << "warning[gridmask-clamp]: d_max=" << gm.d_max << " exceeds a " << bins << "x"
              << f.frames << " feature map; grid periods are clamped per axis\n";
  const Rng base(cfg.train.seed);
  for (Index i = 0; i < f.count; ++i) {
    Rng rng = base.fork(static_cast<std::uint64_t>(i));
    GridMaskConfig always = gm;
    always.p = 1.0;
    const GridMaskPlan plan = draw_grid_mask(bins, f.frames, always, rng);
    char name[32];
    std::snprintf(name, sizeof name, "mask_%02lld.pgm", static_cast<long long>(i));
    Eigen::MatrixXf keep = 1.0f - grid_mask_pattern(bins, f.frames, plan).array();
    write_pgm(out / name, keep);
    std::cout << name << " d=(" << plan.d_f << "," << plan.d_t << ") a=(" << plan.a_f << ","
              << plan.a_t << ")\n";
  }
  return 0;
}

int cmd_param_count(const Flags& f) {
  const RunConfig cfg = run_config(f);
  std::cout << param_count(cfg.model) << "\n";
  return 0;
}

std::string error_kind(const Error& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return "config";
  if (dynamic_cast<const IoError*>(&e)) return "io";
  if (dynamic_cast<const FormatError*>(&e)) return "format";
  if (dynamic_cast<const DimensionError*>(&e)) return "dimension";
  if (dynamic_cast<const NumericError*>(&e)) return "numeric";
  return "runtime";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"TC-SKNet acoustic scene classification toolkit", "tcsk"};
  app.require_subcommand(1);
  Flags f;

  auto add_config = [&](CLI::App* c) {
    c->add_option("--config", f.config, "Run configuration (flat TOML)")->check(CLI::ExistingFile);
  };
  auto add_seed = [&](CLI::App* c) { c->add_option("--seed", f.seed, "Seed for all randomness"); };
  auto add_manifest = [&](CLI::App* c) {
    c->add_option("--manifest", f.manifest, "Dataset manifest CSV")->required();
    c->add_option("--cache-dir", f.cache_dir, "Feature cache directory (else $FEATURE_CACHE_DIR)");
  };
  auto add_out = [&](CLI::App* c, bool required) {
    auto* o = c->add_option("--out", f.out, "Output directory");
    if (required) o->required();
  };

  auto* gen = app.add_subcommand("gen-data", "Write the synthetic tone corpus and its manifest");
  add_out(gen, true);
  add_seed(gen);
  gen->add_option("--clips-per-class", f.clips_per_class)->check(CLI::PositiveNumber);
  gen->add_option("--classes", f.classes)->check(CLI::Range(1, 73));
  gen->add_option("--duration", f.duration, "Clip length in seconds")->check(CLI::PositiveNumber);

  auto* extract = app.add_subcommand("extract-features", "Fill a feature cache for a manifest");
  add_manifest(extract);
  add_config(extract);
  add_out(extract, true);

  auto* tr = app.add_subcommand("train", "Train a network; writes checkpoint.tskn and report.csv");
  add_manifest(tr);
  add_config(tr);
  add_seed(tr);
  add_out(tr, true);
  tr->add_option("--epochs", f.epochs)->check(CLI::PositiveNumber);
  tr->add_option("--policy", f.policy, "Augmentation policy override");
  tr->add_flag("--timing", f.timing, "Record wall-clock seconds in the report");

  auto* ev = app.add_subcommand("eval", "Accuracy and confusion matrix of a checkpoint");
  add_manifest(ev);
  add_config(ev);
  add_out(ev, false);
  ev->add_option("--checkpoint", f.checkpoint)->required()->check(CLI::ExistingFile);
  ev->add_option("--split", f.split)->check(CLI::IsMember({"train", "test"}));

  CLI::App* stages[2];
  const char* stage_names[2] = {"search-model", "search-gridmask"};
  const char* stage_help[2] = {"TPE search over model and training hyperparameters",
                               "TPE search over GridMask parameters for a fixed model"};
  for (int i = 0; i < 2; ++i) {
    stages[i] = app.add_subcommand(stage_names[i], stage_help[i]);
    add_manifest(stages[i]);
    add_config(stages[i]);
    add_seed(stages[i]);
    add_out(stages[i], true);
    stages[i]->add_option("--trials", f.trials)->check(CLI::PositiveNumber);
    stages[i]->add_option("--epochs", f.epochs, "Training epochs per trial")->check(CLI::PositiveNumber);
    stages[i]->add_option("--space", f.space, "Search space file")->check(CLI::ExistingFile);
    stages[i]->add_flag("--timing", f.timing, "Record wall-clock seconds per trial");
  }

  auto* preview = app.add_subcommand("preview-mask", "Write GridMask patterns as PGM images");
  add_config(preview);
  add_seed(preview);
  add_out(preview, true);
  preview->add_option("--count", f.count)->check(CLI::PositiveNumber);
  preview->add_option("--frames", f.frames)->check(CLI::PositiveNumber);

  auto* pc = app.add_subcommand("param-count", "Print the trainable parameter count");
  add_config(pc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error[usage]: " << e.what() << "\n";
    return 1;
  }

  try {
    if (gen->parsed()) return cmd_gen_data(f);
    if (extract->parsed()) return cmd_extract_features(f);
    if (tr->parsed()) return cmd_train(f);
    if (ev->parsed()) return cmd_eval(f);
    if (stages[0]->parsed()) return run_stage(f, false);
    if (stages[1]->parsed()) return run_stage(f, true);
    if (preview->parsed()) return cmd_preview_mask(f);
    if (pc->parsed()) return cmd_param_count(f);
  } catch (const ConfigError& e) {
    std::cerr << "error[config]: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error[" << error_kind(e) << "]: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error[runtime]: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
