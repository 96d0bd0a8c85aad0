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

#include <filesystem>
#include <functional>
#include <optional>
#include <vector>

#include "tcsk/data/dataset.hpp"
#include "tcsk/model/tcsknet.hpp"
#include "tcsk/train/schedule.hpp"

namespace tcsk {

struct EpochRecord {
  Index epoch = 0;
  double lr = 0.0;
  double train_loss = 0.0;
  double val_acc = 0.0;
  double seconds = 0.0;

  friend bool operator==(const EpochRecord&, const EpochRecord&) = default;
};

struct TrainReport {
  std::vector<EpochRecord> epochs;
  Index best_epoch = -1;
  double best_val_acc = -1.0;
  /// Optimizer steps taken over the whole run.
  Index steps = 0;
  /// Weights at the best epoch.
  std::optional<TcskNet<float>> best;
};

struct TrainOutputs {
  /// Rewritten whenever validation accuracy improves.
  std::optional<std::filesystem::path> checkpoint;
  /// Rewritten after every epoch.
  std::optional<std::filesystem::path> report_csv;
  std::function<void(const EpochRecord&)> on_epoch;
};

/// Batch index lists for one epoch: a seeded shuffle cut into runs of
/// `batch_size`. A trailing singleton is folded into the previous batch when
/// `min_batch` is 2.
std::vector<std::vector<std::size_t>> epoch_batches(std::size_t n, Index batch_size,
                                                    Index min_batch, Rng rng);

/// Trains `net` in place on `data.train`, validating on `data.test` after every
/// epoch. Throws NumericError with epoch/batch coordinates on a non-finite loss.
TrainReport train(TcskNet<float>& net, const Dataset& data, const TrainConfig& cfg,
                  const TrainOutputs& outputs = {});

void write_report_csv(const std::filesystem::path& path, const std::vector<EpochRecord>& epochs);

}  // namespace tcsk
