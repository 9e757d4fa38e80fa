//
// Copyright 2026 The tsmia Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef TSMIA_TRAINING_H_
#define TSMIA_TRAINING_H_

#include <cstdint>
#include <limits>
#include <vector>

#include "absl/status/statusor.h"
#include "tsmia/adam.h"
#include "tsmia/dense_network.h"
#include "tsmia/seeds.h"
#include "tsmia/series.h"

namespace tsmia {

enum class LossKind {
  kMae,                // mean absolute error over every output entry
  kBinaryCrossEntropy  // single logit output, sample-weighted
};

// Loss and its gradient with respect to `predictions`. `weights` is only
// used by the cross-entropy loss; empty means uniform.
double MaeLoss(const Matrix& predictions, const Matrix& targets,
               Matrix* gradient);
double BinaryCrossEntropyWithLogits(const Matrix& logits, const Matrix& labels,
                                    const Vector& weights, Matrix* gradient);
double ComputeLoss(LossKind kind, const Matrix& predictions,
                   const Matrix& targets, const Vector& weights,
                   Matrix* gradient);

// Samples are columns of `inputs` / `targets`.
struct TrainingData {
  Matrix inputs;
  Matrix targets;
  Vector weights;  // per-sample; empty = uniform
  Eigen::Index size() const { return inputs.cols(); }
};

struct TrainOptions {
  AdamOptions adam;
  int max_epochs = 50;
  int patience = 3;
  int batch_size = 1024;
  bool early_stopping = true;
  uint64_t seed = 0;
};

struct EpochStats {
  int epoch = 0;  // 1-based
  double train_loss = 0.0;
  double val_loss = std::numeric_limits<double>::quiet_NaN();
};

// Tracks the best validation loss; `patience` consecutive epochs without a
// strict improvement trigger a stop.
class EarlyStopping {
 public:
  explicit EarlyStopping(int patience) : patience_(patience) {}

  // Returns true when `val_loss` is a new best.
  bool Observe(int epoch, double val_loss);
  bool should_stop() const { return epochs_without_improvement_ >= patience_; }
  int best_epoch() const { return best_epoch_; }
  double best_loss() const { return best_loss_; }

 private:
  int patience_;
  int best_epoch_ = 0;
  double best_loss_ = std::numeric_limits<double>::infinity();
  int epochs_without_improvement_ = 0;
};

// Shuffled partition of [0, n) into consecutive minibatches.
std::vector<std::vector<Eigen::Index>> EpochBatches(Eigen::Index n,
                                                    int batch_size, Rng& rng);

struct TrainingResult {
  DenseNetwork network;
  std::vector<EpochStats> history;
  int best_epoch = 0;
};

// Minibatch Adam. With early stopping the returned network is the snapshot
// with the lowest validation loss; otherwise it is the final one. A
// non-finite training loss aborts with the epoch index.
absl::StatusOr<TrainingResult> TrainNetwork(DenseNetwork network,
                                            const TrainingData& train,
                                            const TrainingData* validation,
                                            LossKind loss,
                                            const TrainOptions& options);

}  // namespace tsmia

#endif  // TSMIA_TRAINING_H_
