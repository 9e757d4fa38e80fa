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

#include "tsmia/forecaster.h"

#include <cmath>

#include "absl/strings/str_cat.h"
#include "tsmia/signals.h"
#include "tsmia/status_macros.h"

namespace tsmia {

absl::string_view ForecasterKindName(ForecasterKind kind) {
  return kind == ForecasterKind::kRidge ? "ridge" : "mlp";
}

absl::Status ValidateForecasterConfig(const ForecasterConfig& cfg) {
  if (!(cfg.ridge_lambda >= 0.0)) {
    return absl::InvalidArgumentError("ridge lambda must be >= 0");
  }
  for (int h : cfg.hidden_sizes) {
    if (h < 1) return absl::InvalidArgumentError("hidden sizes must be >= 1");
  }
  if (cfg.patience < 1 || cfg.max_epochs < 1 || cfg.batch_size < 1) {
    return absl::InvalidArgumentError(
        "patience, max epochs and batch size must be >= 1");
  }
  if (!(cfg.learning_rate > 0.0)) {
    return absl::InvalidArgumentError("learning rate must be > 0");
  }
  return absl::OkStatus();
}

absl::StatusOr<ForecastShape> ShapeOf(
    absl::Span<const ForecastRecord> records) {
  if (records.empty()) return absl::InvalidArgumentError("no records");
  ForecastShape shape{static_cast<int>(records[0].input.rows()),
                      static_cast<int>(records[0].input.cols()),
                      static_cast<int>(records[0].target.cols())};
  for (const ForecastRecord& r : records) {
    if (r.input.rows() != shape.variables ||
        r.target.rows() != shape.variables ||
        r.input.cols() != shape.lookback || r.target.cols() != shape.horizon) {
      return absl::InvalidArgumentError(
          absl::StrCat("record of user '", r.user_id, "' at origin ", r.origin,
                       " has inconsistent dimensions"));
    }
  }
  return shape;
}

Matrix FlattenInputs(absl::Span<const ForecastRecord> records) {
  if (records.empty()) return Matrix();
  Matrix out(records[0].input.size(), static_cast<Eigen::Index>(records.size()));
  for (size_t j = 0; j < records.size(); ++j) {
    out.col(static_cast<Eigen::Index>(j)) =
        records[j].input.reshaped();
  }
  return out;
}

Matrix FlattenTargets(absl::Span<const ForecastRecord> records) {
  if (records.empty()) return Matrix();
  Matrix out(records[0].target.size(),
             static_cast<Eigen::Index>(records.size()));
  for (size_t j = 0; j < records.size(); ++j) {
    out.col(static_cast<Eigen::Index>(j)) = records[j].target.reshaped();
  }
  return out;
}

absl::StatusOr<TrainedForecaster> FitRidge(
    absl::Span<const ForecastRecord> records, double lambda) {
  if (!(lambda >= 0.0)) {
    return absl::InvalidArgumentError("ridge lambda must be >= 0");
  }
  TSMIA_ASSIGN_OR_RETURN(ForecastShape shape, ShapeOf(records));
  const Matrix x = FlattenInputs(records);
  const Matrix y = FlattenTargets(records);
  if (!x.allFinite() || !y.allFinite()) {
    return absl::InvalidArgumentError("non-finite training records");
  }

  const Eigen::Index d = x.rows();
  Matrix design(d + 1, x.cols());
  design.topRows(d) = x;
  design.row(d).setOnes();
  Matrix gram = design * design.transpose();
  gram.diagonal().head(d).array() += lambda;
  const Matrix rhs = design * y.transpose();

  Eigen::LLT<Matrix> llt(gram);
  if (llt.info() != Eigen::Success || !(llt.rcond() > 1e-13)) {
    return absl::FailedPreconditionError(absl::StrCat(
        "ridge normal equations are singular (lambda=", lambda, ")"));
  }
  const Matrix solution = llt.solve(rhs);  // (d + 1) x (M*H)

  TrainedForecaster model;
  model.config.kind = ForecasterKind::kRidge;
  model.config.ridge_lambda = lambda;
  model.config.hidden_sizes.clear();
  model.shape = shape;
  model.network = DenseNetwork({shape.input_size(), shape.output_size()});
  model.network.mutable_weights(0) = solution.topRows(d).transpose();
  model.network.mutable_bias(0) = solution.row(d).transpose();
  return model;
}

absl::StatusOr<TrainedForecaster> FitMlp(
    absl::Span<const ForecastRecord> train,
    absl::Span<const ForecastRecord> validation, const ForecasterConfig& cfg) {
  TSMIA_RETURN_IF_ERROR(ValidateForecasterConfig(cfg));
  TSMIA_ASSIGN_OR_RETURN(ForecastShape shape, ShapeOf(train));
  if (cfg.early_stopping && validation.empty()) {
    return absl::InvalidArgumentError(
        "MLP training with early stopping needs validation records");
  }
  if (!validation.empty()) {
    TSMIA_ASSIGN_OR_RETURN(ForecastShape val_shape, ShapeOf(validation));
    if (!(val_shape == shape)) {
      return absl::InvalidArgumentError(
          "train and validation records have different shapes");
    }
  }

  std::vector<int> layers = {shape.input_size()};
  layers.insert(layers.end(), cfg.hidden_sizes.begin(), cfg.hidden_sizes.end());
  layers.push_back(shape.output_size());

  TrainingData train_data{FlattenInputs(train), FlattenTargets(train), {}};
  TrainingData val_data{FlattenInputs(validation), FlattenTargets(validation),
                        {}};
  TrainOptions options;
  options.adam.learning_rate = cfg.learning_rate;
  options.max_epochs = cfg.max_epochs;
  options.patience = cfg.patience;
  options.batch_size = cfg.batch_size;
  options.early_stopping = cfg.early_stopping;
  options.seed = cfg.seed;

  TSMIA_ASSIGN_OR_RETURN(
      TrainingResult result,
      TrainNetwork(DenseNetwork::Initialized(layers, cfg.seed), train_data,
                   validation.empty() ? nullptr : &val_data, LossKind::kMae,
                   options));
  TrainedForecaster model;
  model.config = cfg;
  model.config.kind = ForecasterKind::kMlp;
  model.shape = shape;
  model.network = std::move(result.network);
  model.history = std::move(result.history);
  return model;
}

absl::StatusOr<TrainedForecaster> FitForecaster(
    const ForecasterConfig& cfg, absl::Span<const ForecastRecord> train,
    absl::Span<const ForecastRecord> validation) {
  TSMIA_RETURN_IF_ERROR(ValidateForecasterConfig(cfg));
  if (cfg.kind == ForecasterKind::kRidge) {
    TSMIA_ASSIGN_OR_RETURN(TrainedForecaster model,
                           FitRidge(train, cfg.ridge_lambda));
    model.config = cfg;
    return model;
  }
  return FitMlp(train, validation, cfg);
}

absl::StatusOr<Matrix> Predict(const TrainedForecaster& model,
                               const Matrix& x) {
  if (x.rows() != model.shape.variables || x.cols() != model.shape.lookback) {
    return absl::InvalidArgumentError(absl::StrCat(
        "input is ", x.rows(), "x", x.cols(), ", model expects ",
        model.shape.variables, "x", model.shape.lookback));
  }
  if (!x.allFinite()) return absl::InvalidArgumentError("non-finite input");
  const Matrix flat = model.network.Forward(x.reshaped());
  return Matrix(flat.reshaped(model.shape.variables, model.shape.horizon));
}

Matrix PredictFlat(const TrainedForecaster& model, const Matrix& inputs) {
  return model.network.Forward(inputs);
}

absl::StatusOr<ForecastMetrics> Evaluate(
    const TrainedForecaster& model, absl::Span<const ForecastRecord> records) {
  if (records.empty()) return absl::InvalidArgumentError("no records");
  ForecastMetrics sum;
  for (const ForecastRecord& r : records) {
    TSMIA_ASSIGN_OR_RETURN(Matrix y_hat, Predict(model, r.input));
    TSMIA_ASSIGN_OR_RETURN(double mse, Mse(r.target, y_hat));
    TSMIA_ASSIGN_OR_RETURN(double mae, Mae(r.target, y_hat));
    TSMIA_ASSIGN_OR_RETURN(double smape, Smape(r.target, y_hat));
    TSMIA_ASSIGN_OR_RETURN(double nd, Nd(r.target, y_hat));
    sum.mse += mse;
    sum.mae += mae;
    sum.smape += smape;
    sum.nd += nd;
  }
  const double n = static_cast<double>(records.size());
  return ForecastMetrics{sum.mse / n, sum.mae / n, sum.smape / n, sum.nd / n};
}

}  // namespace tsmia
