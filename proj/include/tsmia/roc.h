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

#ifndef TSMIA_ROC_H_
#define TSMIA_ROC_H_

#include <vector>

#include "absl/status/statusor.h"
#include "absl/types/span.h"

namespace tsmia {

// Operating point of the rule "member iff score >= threshold".
struct RocPoint {
  double threshold = 0.0;
  double fpr = 0.0;
  double tpr = 0.0;
};

// Empirical ROC over all distinct scores, in order of decreasing threshold.
// The first point has threshold +inf and rate (0, 0); the last is (1, 1).
// Equal scores cross a threshold together.
struct RocCurve {
  std::vector<RocPoint> points;
  int positives = 0;
  int negatives = 0;
};

// labels: 1 for members, 0 for non-members.
absl::StatusOr<RocCurve> ComputeRoc(absl::Span<const double> scores,
                                    absl::Span<const int> labels);

// Trapezoidal area; ties get half credit.
double Auc(const RocCurve& roc);

// Largest TPR over operating points with FPR <= fpr_target (no
// interpolation). At fpr_target = 0 this is the TPR of the threshold just
// above the highest non-member score.
double TprAtFpr(const RocCurve& roc, double fpr_target);

absl::StatusOr<double> AucFromScores(absl::Span<const double> scores,
                                     absl::Span<const int> labels);

}  // namespace tsmia

#endif  // TSMIA_ROC_H_
