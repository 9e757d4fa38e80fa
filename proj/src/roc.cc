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

#include "tsmia/roc.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "absl/strings/str_cat.h"

namespace tsmia {

absl::StatusOr<RocCurve> ComputeRoc(absl::Span<const double> scores,
                                    absl::Span<const int> labels) {
  if (scores.size() != labels.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat(scores.size(), " scores but ", labels.size(), " labels"));
  }
  RocCurve roc;
  for (size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) {
      return absl::InvalidArgumentError("labels must be 0 or 1");
    }
    if (std::isnan(scores[i])) {
      return absl::InvalidArgumentError(absl::StrCat("score ", i, " is NaN"));
    }
    (labels[i] == 1 ? roc.positives : roc.negatives) += 1;
  }
  if (roc.positives == 0 || roc.negatives == 0) {
    return absl::InvalidArgumentError("ROC needs both members and non-members");
  }
  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return scores[a] > scores[b]; });

  roc.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
  int tp = 0;
  int fp = 0;
  for (size_t i = 0; i < order.size();) {
    const double threshold = scores[order[i]];
    for (; i < order.size() && scores[order[i]] == threshold; ++i) {
      (labels[order[i]] == 1 ? tp : fp) += 1;
    }
    roc.points.push_back({threshold, static_cast<double>(fp) / roc.negatives,
                          static_cast<double>(tp) / roc.positives});
  }
  return roc;
}

double Auc(const RocCurve& roc) {
  double area = 0.0;
  for (size_t i = 1; i < roc.points.size(); ++i) {
    const RocPoint& a = roc.points[i - 1];
    const RocPoint& b = roc.points[i];
    area += (b.fpr - a.fpr) * (a.tpr + b.tpr) / 2.0;
  }
  return area;
}

double TprAtFpr(const RocCurve& roc, double fpr_target) {
  // Compare counts rather than rates so that e.g. 1/1000 <= 0.001 holds.
  const double allowed = fpr_target * roc.negatives * (1.0 + 1e-12);
  double best = 0.0;
  for (const RocPoint& p : roc.points) {
    const double false_positives = p.fpr * roc.negatives;
    if (false_positives <= allowed + 1e-9) best = std::max(best, p.tpr);
  }
  return best;
}

absl::StatusOr<double> AucFromScores(absl::Span<const double> scores,
                                     absl::Span<const int> labels) {
  absl::StatusOr<RocCurve> roc = ComputeRoc(scores, labels);
  if (!roc.ok()) return roc.status();
  return Auc(*roc);
}

}  // namespace tsmia
