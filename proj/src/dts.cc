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

#include "tsmia/dts.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "tsmia/csv_io.h"
#include "tsmia/parallel.h"
#include "tsmia/seeds.h"
#include "tsmia/status_macros.h"

namespace tsmia {
namespace {

// Splits row indices into (train, validation) with round(fraction * n_c)
// rows of each label c held out.
void StratifiedSplit(const std::vector<int>& labels, double fraction,
                     uint64_t seed, std::vector<Eigen::Index>* train,
                     std::vector<Eigen::Index>* validation) {
  Rng rng = MakeRng(seed, "dts-validation");
  for (int label : {0, 1}) {
    std::vector<Eigen::Index> rows;
    for (size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == label) rows.push_back(static_cast<Eigen::Index>(i));
    }
    std::shuffle(rows.begin(), rows.end(), rng);
    const size_t held = static_cast<size_t>(
        std::lround(fraction * static_cast<double>(rows.size())));
    validation->insert(validation->end(), rows.begin(), rows.begin() + held);
    train->insert(train->end(), rows.begin() + held, rows.end());
  }
  std::sort(train->begin(), train->end());
  std::sort(validation->begin(), validation->end());
}

// Weight n / (2 n_c) for label c, so each label sums to n / 2.
Vector BalancedWeights(const std::vector<int>& labels) {
  const double n = static_cast<double>(labels.size());
  const double positives =
      static_cast<double>(std::count(labels.begin(), labels.end(), 1));
  Vector w(labels.size());
  for (size_t i = 0; i < labels.size(); ++i) {
    w(i) = n / (2.0 * (labels[i] == 1 ? positives : n - positives));
  }
  return w;
}

TrainingData Subset(const Matrix& features, const std::vector<int>& labels,
                    const std::vector<Eigen::Index>& rows, bool balance) {
  TrainingData data;
  data.inputs = features(Eigen::all, rows);
  data.targets.resize(1, rows.size());
  std::vector<int> subset_labels;
  for (size_t j = 0; j < rows.size(); ++j) {
    subset_labels.push_back(labels[rows[j]]);
    data.targets(0, j) = labels[rows[j]];
  }
  const int positives =
      std::count(subset_labels.begin(), subset_labels.end(), 1);
  if (balance && positives > 0 &&
      positives < static_cast<int>(subset_labels.size())) {
    data.weights = BalancedWeights(subset_labels);
  }
  return data;
}

}  // namespace

absl::StatusOr<std::vector<std::vector<int>>> SampleDtsRecords(
    int num_records, int num_shadows, double fraction, uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    return absl::InvalidArgumentError("sample fraction must be in (0, 1]");
  }
  if (num_records < 1 || num_shadows < 1) {
    return absl::InvalidArgumentError("empty DTS sample");
  }
  const int count = static_cast<int>(
      std::ceil(fraction * static_cast<double>(num_records) - 1e-9));
  std::vector<std::vector<int>> samples(num_shadows);
  for (int i = 0; i < num_shadows; ++i) {
    std::vector<int> all(num_records);
    std::iota(all.begin(), all.end(), 0);
    Rng rng = MakeRng(seed, "dts-sample", i);
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(count);
    std::sort(all.begin(), all.end());
    samples[i] = std::move(all);
  }
  return samples;
}

absl::StatusOr<DtsDataset> BuildDtsDataset(
    const ShadowEnsemble& ensemble,
    absl::Span<const ForecastRecord> source_records, double fraction,
    uint64_t seed, int jobs) {
  const int k = ensemble.plan.num_models();
  if (static_cast<int>(ensemble.models.size()) != k) {
    return absl::InvalidArgumentError("ensemble models do not match plan");
  }
  TSMIA_ASSIGN_OR_RETURN(ForecastShape shape, ShapeOf(source_records));
  TSMIA_ASSIGN_OR_RETURN(
      std::vector<std::vector<int>> samples,
      SampleDtsRecords(static_cast<int>(source_records.size()), k, fraction,
                       seed));
  const int per_shadow = static_cast<int>(samples[0].size());
  const int n = shape.output_size();

  DtsDataset dataset;
  dataset.output_size = n;
  dataset.truth.resize(n, static_cast<Eigen::Index>(k) * per_shadow);
  dataset.predicted.resize(n, dataset.truth.cols());
  dataset.record_ids.resize(dataset.truth.cols());
  dataset.shadow_index.resize(dataset.truth.cols());
  dataset.labels.resize(dataset.truth.cols());
  // Each shadow writes only its own column block.
  TSMIA_RETURN_IF_ERROR(ParallelFor(k, jobs, [&](int i) -> absl::Status {
    std::vector<ForecastRecord> sampled;
    sampled.reserve(per_shadow);
    for (int r : samples[i]) sampled.push_back(source_records[r]);
    if (!(ensemble.models[i].shape == shape)) {
      return absl::InvalidArgumentError(
          absl::StrCat("shadow ", i, ": shape mismatch"));
    }
    const Eigen::Index base = static_cast<Eigen::Index>(i) * per_shadow;
    dataset.truth.middleCols(base, per_shadow) = FlattenTargets(sampled);
    dataset.predicted.middleCols(base, per_shadow) =
        PredictRecords(ensemble.models[i], sampled);
    for (int j = 0; j < per_shadow; ++j) {
      dataset.record_ids[base + j] = RecordId(sampled[j]);
      dataset.shadow_index[base + j] = i;
      dataset.labels[base + j] =
          ensemble.plan.TrainsOn(i, sampled[j].user_id) ? 1 : 0;
    }
    return absl::OkStatus();
  }));
  return dataset;
}

absl::StatusOr<Vector> Featurize(const Matrix& y, const Matrix& y_hat) {
  if (y.rows() != y_hat.rows() || y.cols() != y_hat.cols()) {
    return absl::InvalidArgumentError("Y and Yhat shapes differ");
  }
  const Eigen::Index n = y.size();
  Vector out(3 * n);
  out.head(n) = y.reshaped();
  out.segment(n, n) = y_hat.reshaped();
  out.tail(n) = (y - y_hat).reshaped();
  return out;
}

Matrix FeaturizeFlat(const Matrix& truth, const Matrix& predicted) {
  const Eigen::Index n = truth.rows();
  Matrix out(3 * n, truth.cols());
  out.topRows(n) = truth;
  out.middleRows(n, n) = predicted;
  out.bottomRows(n) = truth - predicted;
  return out;
}

absl::Status ValidateDtsConfig(const DtsConfig& cfg) {
  for (int h : cfg.hidden_sizes) {
    if (h < 1) return absl::InvalidArgumentError("hidden sizes must be >= 1");
  }
  if (!(cfg.learning_rate > 0.0)) {
    return absl::InvalidArgumentError("learning rate must be positive");
  }
  if (cfg.max_epochs < 1 || cfg.patience < 1 || cfg.batch_size < 1) {
    return absl::InvalidArgumentError(
        "max epochs, patience and batch size must be >= 1");
  }
  if (!(cfg.validation_fraction > 0.0 && cfg.validation_fraction < 1.0)) {
    return absl::InvalidArgumentError(
        "validation fraction must be in (0, 1)");
  }
  return absl::OkStatus();
}

absl::StatusOr<DtsClassifier> TrainDts(const DtsDataset& dataset,
                                       const DtsConfig& cfg, uint64_t seed) {
  TSMIA_RETURN_IF_ERROR(ValidateDtsConfig(cfg));
  const int positives =
      std::count(dataset.labels.begin(), dataset.labels.end(), 1);
  if (positives == 0 || positives == dataset.rows()) {
    return absl::FailedPreconditionError(
        "DTS dataset has a single label; both members and non-members are "
        "required");
  }
  std::vector<Eigen::Index> train_rows, validation_rows;
  StratifiedSplit(dataset.labels, cfg.validation_fraction, seed, &train_rows,
                  &validation_rows);
  if (train_rows.empty() || validation_rows.empty()) {
    return absl::FailedPreconditionError(
        "DTS dataset too small for a validation split");
  }

  const Matrix features = FeaturizeFlat(dataset.truth, dataset.predicted);
  const TrainingData train =
      Subset(features, dataset.labels, train_rows, cfg.balance_classes);
  const TrainingData validation =
      Subset(features, dataset.labels, validation_rows, cfg.balance_classes);

  std::vector<int> sizes = {static_cast<int>(features.rows())};
  sizes.insert(sizes.end(), cfg.hidden_sizes.begin(), cfg.hidden_sizes.end());
  sizes.push_back(1);
  TrainOptions options;
  options.adam.learning_rate = cfg.learning_rate;
  options.max_epochs = cfg.max_epochs;
  options.patience = cfg.patience;
  options.batch_size = cfg.batch_size;
  options.early_stopping = true;
  options.seed = DeriveSeed(seed, "dts-batches");
  absl::StatusOr<TrainingResult> result = TrainNetwork(
      DenseNetwork::Initialized(sizes, DeriveSeed(seed, "dts-init")), train,
      &validation, LossKind::kBinaryCrossEntropy, options);
  if (!result.ok()) {
    return absl::Status(result.status().code(),
                        absl::StrCat("DTS: ", result.status().message()));
  }
  DtsClassifier classifier;
  classifier.config = cfg;
  classifier.output_size = dataset.output_size;
  classifier.network = std::move(result->network);
  classifier.history = std::move(result->history);
  return classifier;
}

double Sigmoid(double logit) {
  if (logit >= 0.0) return 1.0 / (1.0 + std::exp(-logit));
  const double e = std::exp(logit);
  return e / (1.0 + e);
}

absl::StatusOr<double> DtsScore(const DtsClassifier& classifier,
                                const Matrix& y, const Matrix& y_hat) {
  TSMIA_ASSIGN_OR_RETURN(Vector features, Featurize(y, y_hat));
  if (features.size() != classifier.network.input_size()) {
    return absl::InvalidArgumentError("pair size does not match classifier");
  }
  return Sigmoid(classifier.network.Forward(features)(0, 0));
}

absl::StatusOr<std::vector<double>> DtsScores(const DtsClassifier& classifier,
                                              const Matrix& truth,
                                              const Matrix& predicted) {
  if (truth.rows() != predicted.rows() || truth.cols() != predicted.cols() ||
      3 * truth.rows() != classifier.network.input_size()) {
    return absl::InvalidArgumentError("pair size does not match classifier");
  }
  const Matrix logits =
      classifier.network.Forward(FeaturizeFlat(truth, predicted));
  std::vector<double> scores(logits.cols());
  for (Eigen::Index j = 0; j < logits.cols(); ++j) {
    scores[j] = Sigmoid(logits(0, j));
  }
  return scores;
}

std::string FormatDtsDataset(const DtsDataset& dataset) {
  std::string out = "record_id,shadow_index,label";
  for (int i = 0; i < dataset.output_size; ++i) absl::StrAppend(&out, ",y_", i);
  for (int i = 0; i < dataset.output_size; ++i) {
    absl::StrAppend(&out, ",yhat_", i);
  }
  out += "\n";
  for (int j = 0; j < dataset.rows(); ++j) {
    absl::StrAppend(&out, dataset.record_ids[j], ",", dataset.shadow_index[j],
                    ",", dataset.labels[j]);
    for (int i = 0; i < dataset.output_size; ++i) {
      absl::StrAppend(&out, ",", FormatDouble(dataset.truth(i, j)));
    }
    for (int i = 0; i < dataset.output_size; ++i) {
      absl::StrAppend(&out, ",", FormatDouble(dataset.predicted(i, j)));
    }
    out += "\n";
  }
  return out;
}

}  // namespace tsmia
