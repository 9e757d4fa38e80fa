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

#ifndef TSMIA_DTS_H_
#define TSMIA_DTS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/types/span.h"
#include "tsmia/dense_network.h"
#include "tsmia/series.h"
#include "tsmia/shadow.h"
#include "tsmia/training.h"

namespace tsmia {

// Learned membership classifier over (Y, Yhat) pairs produced by shadow
// models. Row j of the dataset is one (record, shadow) evaluation labeled
// by whether the record's user trained that shadow.
struct DtsDataset {
  int output_size = 0;  // M * H
  std::vector<std::string> record_ids;
  std::vector<int> shadow_index;
  std::vector<int> labels;
  Matrix truth;      // output_size x rows, vec(Y)
  Matrix predicted;  // output_size x rows, vec(Yhat)
  int rows() const { return static_cast<int>(labels.size()); }
};

// Per shadow, ceil(fraction * num_records) distinct record indices in
// increasing order, drawn from DeriveSeed(seed, "dts-sample", shadow).
absl::StatusOr<std::vector<std::vector<int>>> SampleDtsRecords(
    int num_records, int num_shadows, double fraction, uint64_t seed);

// Rows are grouped by shadow, then by record index. Online attacks pass the
// train u test pool records, offline attacks the aux records.
absl::StatusOr<DtsDataset> BuildDtsDataset(
    const ShadowEnsemble& ensemble,
    absl::Span<const ForecastRecord> source_records, double fraction,
    uint64_t seed, int jobs = 1);

// [vec(Y); vec(Yhat); vec(Y - Yhat)], length 3 * M * H.
absl::StatusOr<Vector> Featurize(const Matrix& y, const Matrix& y_hat);
// Column-wise Featurize of flattened pairs.
Matrix FeaturizeFlat(const Matrix& truth, const Matrix& predicted);

struct DtsConfig {
  std::vector<int> hidden_sizes = {64, 32};
  double learning_rate = 1e-3;
  int max_epochs = 64;
  int patience = 3;
  int batch_size = 128;
  // Held out per label for early stopping.
  double validation_fraction = 0.2;
  // Reweights samples so both labels carry equal total mass.
  bool balance_classes = true;
};

absl::Status ValidateDtsConfig(const DtsConfig& cfg);

struct DtsClassifier {
  DtsConfig config;
  int output_size = 0;
  DenseNetwork network;  // 3 * output_size -> hidden... -> 1 logit
  std::vector<EpochStats> history;
};

// Weights from DeriveSeed(seed, "dts-init"), validation split from
// "dts-validation", batches from "dts-batches". The returned network is the
// best-validation snapshot.
absl::StatusOr<DtsClassifier> TrainDts(const DtsDataset& dataset,
                                       const DtsConfig& cfg, uint64_t seed);

// Estimated membership probability of (Y, Yhat).
absl::StatusOr<double> DtsScore(const DtsClassifier& classifier,
                                const Matrix& y, const Matrix& y_hat);
// Column-wise scores of flattened pairs.
absl::StatusOr<std::vector<double>> DtsScores(const DtsClassifier& classifier,
                                              const Matrix& truth,
                                              const Matrix& predicted);

double Sigmoid(double logit);

// Columnar text: "record_id,shadow_index,label,y_0..y_{n-1},yhat_0..".
std::string FormatDtsDataset(const DtsDataset& dataset);

}  // namespace tsmia

#endif  // TSMIA_DTS_H_
