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

#ifndef TSMIA_FORECASTER_H_
#define TSMIA_FORECASTER_H_

#include <cstdint>
#include <string>
#include "absl/strings/string_view.h"
#include <vector>

#include "absl/status/statusor.h"
#include "absl/types/span.h"
#include "tsmia/dense_network.h"
#include "tsmia/series.h"
#include "tsmia/training.h"

namespace tsmia {

enum class ForecasterKind { kRidge, kMlp };

absl::string_view ForecasterKindName(ForecasterKind kind);

struct ForecasterConfig {
  ForecasterKind kind = ForecasterKind::kMlp;
  double ridge_lambda = 1e-3;
  std::vector<int> hidden_sizes = {64};
  double learning_rate = 1e-3;
  int max_epochs = 50;
  int patience = 3;
  int batch_size = 1024;
  // When false, validation is not used for model selection and the final
  // parameters after `max_epochs` are kept (deliberately overfit targets).
  bool early_stopping = true;
  uint64_t seed = 0;
};

absl::Status ValidateForecasterConfig(const ForecasterConfig& cfg);

struct ForecastShape {
  int variables = 0;
  int lookback = 0;
  int horizon = 0;

  int input_size() const { return variables * lookback; }
  int output_size() const { return variables * horizon; }
  bool operator==(const ForecastShape&) const = default;
};

// Both model kinds are a DenseNetwork over the flattened input (column-major
// M x L, i.e. all variables of step 0 first); ridge is the single-layer case.
struct TrainedForecaster {
  ForecasterConfig config;
  ForecastShape shape;
  DenseNetwork network;
  std::vector<EpochStats> history;
};

absl::StatusOr<ForecastShape> ShapeOf(absl::Span<const ForecastRecord> records);

// Columns are flattened records: (M*L) x n and (M*H) x n.
Matrix FlattenInputs(absl::Span<const ForecastRecord> records);
Matrix FlattenTargets(absl::Span<const ForecastRecord> records);

// Closed-form ridge on [vec(X), 1] -> vec(Y); the bias is not penalized.
// At lambda = 0 a numerically singular Gram matrix is an error.
absl::StatusOr<TrainedForecaster> FitRidge(
    absl::Span<const ForecastRecord> records, double lambda);

// MLP with ReLU hidden layers trained by Adam on the MAE loss.
absl::StatusOr<TrainedForecaster> FitMlp(
    absl::Span<const ForecastRecord> train,
    absl::Span<const ForecastRecord> validation, const ForecasterConfig& cfg);

// Dispatches on cfg.kind (ridge ignores `validation`).
absl::StatusOr<TrainedForecaster> FitForecaster(
    const ForecasterConfig& cfg, absl::Span<const ForecastRecord> train,
    absl::Span<const ForecastRecord> validation);

// X (M x L) -> Yhat (M x H).
absl::StatusOr<Matrix> Predict(const TrainedForecaster& model, const Matrix& x);

// Flattened batch prediction; columns of `inputs` are vec(X).
Matrix PredictFlat(const TrainedForecaster& model, const Matrix& inputs);

struct ForecastMetrics {
  double mse = 0.0;
  double mae = 0.0;
  double smape = 0.0;
  double nd = 0.0;
};

// Per-record signal definitions averaged over `records`.
absl::StatusOr<ForecastMetrics> Evaluate(
    const TrainedForecaster& model, absl::Span<const ForecastRecord> records);

}  // namespace tsmia

#endif  // TSMIA_FORECASTER_H_
