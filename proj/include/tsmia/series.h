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

#ifndef TSMIA_SERIES_H_
#define TSMIA_SERIES_H_

#include <cstdint>
#include <string>
#include <vector>

#include "Eigen/Dense"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/types/span.h"

namespace tsmia {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// One entity's multivariate series. `values` is M variables x T steps.
struct UserSeries {
  std::string user_id;
  Matrix values;

  int variables() const { return static_cast<int>(values.rows()); }
  int length() const { return static_cast<int>(values.cols()); }
};

// A single (input, target) forecasting pair. `origin` is the 0-based index of
// the last input column; input covers [origin - L + 1, origin] and target
// covers [origin + 1, origin + H].
struct ForecastRecord {
  std::string user_id;
  int origin = 0;
  Matrix input;   // M x L
  Matrix target;  // M x H
};

absl::Status ValidateSeries(const UserSeries& series);

// Number of windows produced for a series of `length` steps; 0 when the
// series is shorter than lookback + horizon.
int64_t WindowCount(int64_t length, int lookback, int horizon, int stride);

// Sliding-window segmentation in increasing origin order.
absl::StatusOr<std::vector<ForecastRecord>> WindowSeries(
    const UserSeries& series, int lookback, int horizon, int stride);

// Robust per-variable scaling: (x - median) / IQR.
struct ScalerParams {
  Vector center;
  Vector scale;
};

// Quantile of already-sorted data using linear interpolation between order
// statistics at position q * (n - 1).
double SortedQuantile(absl::Span<const double> sorted, double q);

// Fits median/IQR on the pooled values of `series_set`. A zero IQR is an
// error unless `unit_scale_fallback` is set, in which case scale = 1.
absl::StatusOr<ScalerParams> FitScaler(absl::Span<const UserSeries> series_set,
                                       bool unit_scale_fallback = false);
absl::StatusOr<UserSeries> ApplyScaler(const UserSeries& series,
                                       const ScalerParams& params);
absl::StatusOr<UserSeries> InvertScaler(const UserSeries& series,
                                        const ScalerParams& params);

struct SplitSizes {
  int train = 0;
  int val = 0;
  int test = 0;
  int aux = 0;
};

struct PopulationSplit {
  std::vector<std::string> train_users;
  std::vector<std::string> val_users;
  std::vector<std::string> test_users;
  std::vector<std::string> aux_users;
};

// Uniformly random, seed-deterministic assignment of users to the four
// disjoint roles. Users not needed by `sizes` are left unassigned.
absl::StatusOr<PopulationSplit> SplitUsers(
    const std::vector<std::string>& user_ids, const SplitSizes& sizes,
    uint64_t seed);

}  // namespace tsmia

#endif  // TSMIA_SERIES_H_
