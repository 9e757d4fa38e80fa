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

#ifndef TSMIA_ENSEMBLE_ATTACK_H_
#define TSMIA_ENSEMBLE_ATTACK_H_

#include <cstdint>
#include <vector>

#include "absl/status/statusor.h"
#include "tsmia/series.h"

namespace tsmia {

struct EnsembleConfig {
  int executions = 5;
  int repetitions = 3;
  int subset_size = 50;  // half members, half non-members
  int combinations = 9;
  double holdout_fraction = 0.3;  // of each subset, for candidate selection
  double l2 = 1.0;                // combiner penalty
};

absl::Status ValidateEnsembleConfig(const EnsembleConfig& cfg);

// One threshold per feature, "member iff direction * (x - threshold) <= 0",
// combined by an L2-regularized logistic regression over the indicators.
class StumpLogisticClassifier {
 public:
  // Rows of `features` are samples; labels are 0/1 and both present.
  static absl::StatusOr<StumpLogisticClassifier> Fit(const Matrix& features,
                                                     const std::vector<int>& labels,
                                                     double l2);

  double Probability(const Eigen::RowVectorXd& x) const;
  Vector Probabilities(const Matrix& features) const;

  const Vector& thresholds() const { return thresholds_; }
  const Vector& directions() const { return directions_; }

 private:
  Vector Indicators(const Eigen::RowVectorXd& x) const;

  Vector thresholds_;
  Vector directions_;  // +1: member below threshold, -1: above
  Vector weights_;
  double bias_ = 0.0;
};

// Score = fraction of kept classifiers voting "member" (probability >= 0.5),
// over `executions` x `combinations` classifiers. Each combination is a
// disjoint balanced subset of the labeled data; of `repetitions` candidates
// trained on random splits of it, the one with the best held-out ROC-AUC is
// kept. Rows of each matrix are records, columns features.
absl::StatusOr<std::vector<double>> EnsembleAttackScores(
    const Matrix& members, const Matrix& nonmembers, const Matrix& audit,
    const EnsembleConfig& cfg, uint64_t seed);

}  // namespace tsmia

#endif  // TSMIA_ENSEMBLE_ATTACK_H_
