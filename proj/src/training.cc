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

#include "tsmia/training.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "absl/strings/str_cat.h"

namespace tsmia {

double MaeLoss(const Matrix& predictions, const Matrix& targets,
               Matrix* gradient) {
  const Matrix diff = predictions - targets;
  const double count = static_cast<double>(diff.size());
  if (gradient != nullptr) {
    *gradient = diff.unaryExpr([count](double d) {
      return d > 0.0 ? 1.0 / count : (d < 0.0 ? -1.0 / count : 0.0);
    });
  }
  return diff.cwiseAbs().sum() / count;
}

double BinaryCrossEntropyWithLogits(const Matrix& logits, const Matrix& labels,
                                    const Vector& weights, Matrix* gradient) {
  const Eigen::Index n = logits.cols();
  const bool weighted = weights.size() == n;
  const double total_weight = weighted ? weights.sum() : static_cast<double>(n);
  double loss = 0.0;
  if (gradient != nullptr) gradient->resize(1, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double z = logits(0, i);
    const double y = labels(0, i);
    const double w = weighted ? weights(i) : 1.0;
    // softplus(z) - y*z, evaluated without overflow.
    const double softplus = std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
    loss += w * (softplus - y * z);
    if (gradient != nullptr) {
      const double p = 1.0 / (1.0 + std::exp(-z));
      (*gradient)(0, i) = w * (p - y) / total_weight;
    }
  }
  return loss / total_weight;
}

double ComputeLoss(LossKind kind, const Matrix& predictions,
                   const Matrix& targets, const Vector& weights,
                   Matrix* gradient) {
  switch (kind) {
    case LossKind::kMae:
      return MaeLoss(predictions, targets, gradient);
    case LossKind::kBinaryCrossEntropy:
      return BinaryCrossEntropyWithLogits(predictions, targets, weights,
                                          gradient);
  }
  return std::nan("");
}

bool EarlyStopping::Observe(int epoch, double val_loss) {
  if (val_loss < best_loss_) {
    best_loss_ = val_loss;
    best_epoch_ = epoch;
    epochs_without_improvement_ = 0;
    return true;
  }
  ++epochs_without_improvement_;
  return false;
}

std::vector<std::vector<Eigen::Index>> EpochBatches(Eigen::Index n,
                                                    int batch_size, Rng& rng) {
  std::vector<Eigen::Index> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::vector<Eigen::Index>> batches;
  for (Eigen::Index start = 0; start < n; start += batch_size) {
    const Eigen::Index end = std::min<Eigen::Index>(n, start + batch_size);
    batches.emplace_back(order.begin() + start, order.begin() + end);
  }
  return batches;
}

namespace {

double FullLoss(const DenseNetwork& net, const TrainingData& data,
                LossKind loss) {
  return ComputeLoss(loss, net.Forward(data.inputs), data.targets,
                     data.weights, nullptr);
}

}  // namespace

absl::StatusOr<TrainingResult> TrainNetwork(DenseNetwork network,
                                            const TrainingData& train,
                                            const TrainingData* validation,
                                            LossKind loss,
                                            const TrainOptions& options) {
  if (train.size() == 0) {
    return absl::InvalidArgumentError("empty training set");
  }
  if (options.early_stopping &&
      (validation == nullptr || validation->size() == 0)) {
    return absl::InvalidArgumentError(
        "early stopping requires a non-empty validation set");
  }
  if (options.batch_size < 1 || options.max_epochs < 1 ||
      options.patience < 1) {
    return absl::InvalidArgumentError(
        "batch size, max epochs and patience must be >= 1");
  }

  const bool weighted = train.weights.size() == train.size();
  Rng rng = MakeRng(options.seed, "epoch-batches");
  Adam adam(network.parameter_count(), options.adam);
  EarlyStopping stopper(options.patience);

  TrainingResult result;
  Vector best_parameters = network.parameters();
  DenseNetwork::Cache cache;
  Matrix output_grad;
  for (int epoch = 1; epoch <= options.max_epochs; ++epoch) {
    double loss_sum = 0.0;
    for (const std::vector<Eigen::Index>& batch :
         EpochBatches(train.size(), options.batch_size, rng)) {
      const Matrix inputs = train.inputs(Eigen::all, batch);
      const Matrix targets = train.targets(Eigen::all, batch);
      const Vector weights =
          weighted ? Vector(train.weights(batch)) : Vector();
      const Matrix out = network.Forward(inputs, &cache);
      const double batch_loss =
          ComputeLoss(loss, out, targets, weights, &output_grad);
      if (!std::isfinite(batch_loss)) {
        return absl::InternalError(absl::StrCat(
            "training diverged: non-finite loss at epoch ", epoch));
      }
      loss_sum += batch_loss * static_cast<double>(batch.size());
      adam.Step(network.mutable_parameters(), network.Backward(cache, output_grad));
    }
    if (!network.parameters().allFinite()) {
      return absl::InternalError(absl::StrCat(
          "training diverged: non-finite parameters at epoch ", epoch));
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.train_loss = loss_sum / static_cast<double>(train.size());
    if (validation != nullptr && validation->size() > 0) {
      stats.val_loss = FullLoss(network, *validation, loss);
    }
    result.history.push_back(stats);

    if (options.early_stopping) {
      if (stopper.Observe(epoch, stats.val_loss)) {
        best_parameters = network.parameters();
      }
      if (stopper.should_stop()) break;
    }
  }

  if (options.early_stopping) {
    if (stopper.best_epoch() == 0) {
      return absl::InternalError("validation loss was never finite");
    }
    result.best_epoch = stopper.best_epoch();
    if (absl::Status s = network.SetParameters(std::move(best_parameters));
        !s.ok()) {
      return s;
    }
  } else {
    result.best_epoch = static_cast<int>(result.history.size());
  }
  result.network = std::move(network);
  return result;
}

}  // namespace tsmia
