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

#include "tcsk/train/trainer.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>

#include "tcsk/model/checkpoint.hpp"
#include "tcsk/numerics/ops.hpp"
#include "tcsk/train/adam.hpp"
#include "tcsk/train/evaluate.hpp"
#include "tcsk/util/error.hpp"

namespace tcsk {

std::vector<std::vector<std::size_t>> epoch_batches(std::size_t n, Index batch_size,
                                                    Index min_batch, Rng rng) {
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i - 1)));
    std::swap(order[i - 1], order[j]);
  }
  std::vector<std::vector<std::size_t>> batches;
  const auto bs = static_cast<std::size_t>(batch_size);
  for (std::size_t start = 0; start < n; start += bs)
    batches.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(start),
                         order.begin() + static_cast<std::ptrdiff_t>(std::min(n, start + bs)));
  if (min_batch >= 2 && batches.size() >= 2 && batches.back().size() < 2) {
    auto tail = std::move(batches.back());
    batches.pop_back();
    batches.back().insert(batches.back().end(), tail.begin(), tail.end());
  }
  return batches;
}

namespace {

struct Batch {
  Tensor<float> inputs;   // [N, bins, T]
  Tensor<float> targets;  // [N, classes]
};

Batch make_batch(const std::vector<LabeledFeatures>& items) {
  const auto n = static_cast<Index>(items.size());
  const Index bins = items.front().features.bins();
  const Index frames = items.front().features.frames();
  const auto classes = static_cast<Index>(items.front().target.size());
  Batch b{Tensor<float>::zeros({n, bins, frames}), Tensor<float>::zeros({n, classes})};
  for (Index i = 0; i < n; ++i) {
    const auto& it = items[static_cast<std::size_t>(i)];
    if (it.features.frames() != frames || it.features.bins() != bins)
      throw DimensionError("training batch has inconsistent feature shapes");
    b.inputs.data().segment(i * bins * frames, bins * frames) = it.features.coeffs.data();
    b.targets.data().segment(i * classes, classes) = it.target.cast<float>();
  }
  return b;
}

}  // namespace

TrainReport train(TcskNet<float>& net, const Dataset& data, const TrainConfig& cfg,
                  const TrainOutputs& outputs) {
  cfg.validate();
  if (data.train.empty()) throw ConfigError("train: training split is empty");
  if (data.test.empty()) throw ConfigError("train: validation split is empty");
  const Index n_classes = net.config().n_classes;
  if (data.n_classes() != n_classes)
    throw ConfigError("train: dataset has " + std::to_string(data.n_classes()) +
                      " classes but the model has " + std::to_string(n_classes));
  for (const auto& e : data.train)
    if (e.label < 0 || e.label >= n_classes) throw ConfigError("train: label index out of range");

  AdamConfig adam_cfg;
  adam_cfg.weight_decay = cfg.weight_decay;
  adam_cfg.weight_decay_mode = cfg.weight_decay_mode;
  Adam adam(net.parameters(), adam_cfg);

  const Rng base(cfg.seed);
  const Index min_batch = uses_mixup(cfg.augmentation.policy) ? 2 : 1;
  TrainReport report;

  for (Index epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    const double lr = lr_at(epoch, cfg);
    const auto batches = epoch_batches(data.train.size(), cfg.batch_size, min_batch,
                                       base.fork(1).fork(static_cast<std::uint64_t>(epoch)));
    double loss_sum = 0.0;
    std::size_t seen = 0;

    for (std::size_t b = 0; b < batches.size(); ++b) {
      Index frames = std::numeric_limits<Index>::max();
      for (auto i : batches[b]) frames = std::min(frames, data.train[i].features.frames());
      std::vector<LabeledFeatures> items;
      for (auto i : batches[b])
        items.push_back({crop_frames(data.train[i].features, frames),
                         one_hot(data.train[i].label, n_classes)});

      Rng aug_rng = base.fork(2).fork(static_cast<std::uint64_t>(epoch)).fork(b);
      Rng drop_rng = base.fork(3).fork(static_cast<std::uint64_t>(epoch)).fork(b);
      const Batch batch = make_batch(compose(items, cfg.augmentation, aug_rng));

      for (auto& p : net.parameters()) p.second->zero_grad();
      Graph<float> g;
      const Var<float> logits = net.forward(g.constant(batch.inputs), Mode::train, drop_rng, true);
      const Var<float> loss = cross_entropy(logits, batch.targets);
      const double value = loss.value()[0];
      if (!std::isfinite(value))
        throw NumericError("non-finite loss at epoch " + std::to_string(epoch) + " batch " +
                           std::to_string(b));
      g.backward(loss);
      adam.step(lr);
      ++report.steps;
      loss_sum += value * static_cast<double>(batches[b].size());
      seen += batches[b].size();
    }

    const EvalResult val = evaluate(net, data.test);
    EpochRecord rec{epoch, lr, loss_sum / static_cast<double>(seen), val.accuracy, 0.0};
    if (cfg.timing)
      rec.seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report.epochs.push_back(rec);

    if (val.accuracy > report.best_val_acc) {
      report.best_val_acc = val.accuracy;
      report.best_epoch = epoch;
      report.best = net;
      if (outputs.checkpoint) save_checkpoint(*outputs.checkpoint, net, data.stats, data.labels);
    }
    if (outputs.report_csv) write_report_csv(*outputs.report_csv, report.epochs);
    if (outputs.on_epoch) outputs.on_epoch(rec);
  }
  return report;
}

void write_report_csv(const std::filesystem::path& path, const std::vector<EpochRecord>& epochs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot create report " + path.string());
  out << "epoch,lr,train_loss,val_acc,seconds\n";
  char line[160];
  for (const auto& r : epochs) {
    std::snprintf(line, sizeof line, "%lld,%.10g,%.10g,%.10g,%.3f\n",
                  static_cast<long long>(r.epoch), r.lr, r.train_loss, r.val_acc, r.seconds);
    out << line;
  }
  if (!out) throw IoError("failed writing report " + path.string());
}

}  // namespace tcsk
