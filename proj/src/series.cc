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

#include "tsmia/series.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "absl/strings/str_cat.h"
#include "tsmia/seeds.h"

namespace tsmia {

absl::Status ValidateSeries(const UserSeries& series) {
  if (series.variables() < 1 || series.length() < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("series '", series.user_id, "' is empty (",
                     series.variables(), "x", series.length(), ")"));
  }
  if (!series.values.allFinite()) {
    return absl::InvalidArgumentError(
        absl::StrCat("series '", series.user_id, "' has non-finite values"));
  }
  return absl::OkStatus();
}

int64_t WindowCount(int64_t length, int lookback, int horizon, int stride) {
  const int64_t span = static_cast<int64_t>(lookback) + horizon;
  if (length < span) return 0;
  return (length - span) / stride + 1;
}

absl::StatusOr<std::vector<ForecastRecord>> WindowSeries(
    const UserSeries& series, int lookback, int horizon, int stride) {
  if (lookback < 1 || horizon < 1 || stride < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("window parameters must be >= 1 (L=", lookback,
                     ", H=", horizon, ", stride=", stride, ")"));
  }
  if (absl::Status s = ValidateSeries(series); !s.ok()) return s;

  const int64_t count =
      WindowCount(series.length(), lookback, horizon, stride);
  std::vector<ForecastRecord> records;
  records.reserve(static_cast<size_t>(count));
  for (int64_t j = 0; j < count; ++j) {
    const int start = static_cast<int>(j * stride);
    ForecastRecord record;
    record.user_id = series.user_id;
    record.origin = start + lookback - 1;
    record.input = series.values.middleCols(start, lookback);
    record.target = series.values.middleCols(start + lookback, horizon);
    records.push_back(std::move(record));
  }
  return records;
}

double SortedQuantile(absl::Span<const double> sorted, double q) {
  if (sorted.empty()) return std::nan("");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const size_t lo = static_cast<size_t>(std::floor(pos));
  const size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

absl::StatusOr<ScalerParams> FitScaler(absl::Span<const UserSeries> series_set,
                                       bool unit_scale_fallback) {
  if (series_set.empty()) {
    return absl::InvalidArgumentError("cannot fit a scaler on an empty set");
  }
  const int m = series_set.front().variables();
  for (const UserSeries& s : series_set) {
    if (absl::Status st = ValidateSeries(s); !st.ok()) return st;
    if (s.variables() != m) {
      return absl::InvalidArgumentError(
          absl::StrCat("variable count mismatch: '", s.user_id, "' has ",
                       s.variables(), ", expected ", m));
    }
  }

  ScalerParams params{Vector(m), Vector(m)};
  std::vector<double> pooled;
  for (int v = 0; v < m; ++v) {
    pooled.clear();
    for (const UserSeries& s : series_set) {
      for (int t = 0; t < s.length(); ++t) pooled.push_back(s.values(v, t));
    }
    std::sort(pooled.begin(), pooled.end());
    const double median = SortedQuantile(pooled, 0.5);
    const double iqr =
        SortedQuantile(pooled, 0.75) - SortedQuantile(pooled, 0.25);
    params.center(v) = median;
    if (!(iqr > 0.0)) {
      if (!unit_scale_fallback) {
        return absl::FailedPreconditionError(absl::StrCat(
            "degenerate scale: variable ", v, " has zero interquartile range"));
      }
      params.scale(v) = 1.0;
    } else {
      params.scale(v) = iqr;
    }
  }
  return params;
}

namespace {

absl::Status CheckScalerShape(const UserSeries& series,
                              const ScalerParams& params) {
  if (params.center.size() != series.variables() ||
      params.scale.size() != series.variables()) {
    return absl::InvalidArgumentError(
        absl::StrCat("scaler has ", params.center.size(),
                     " variables but series '", series.user_id, "' has ",
                     series.variables()));
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<UserSeries> ApplyScaler(const UserSeries& series,
                                       const ScalerParams& params) {
  if (absl::Status s = CheckScalerShape(series, params); !s.ok()) return s;
  UserSeries out{series.user_id, series.values};
  out.values.colwise() -= params.center;
  out.values.array().colwise() /= params.scale.array();
  return out;
}

absl::StatusOr<UserSeries> InvertScaler(const UserSeries& series,
                                        const ScalerParams& params) {
  if (absl::Status s = CheckScalerShape(series, params); !s.ok()) return s;
  UserSeries out{series.user_id, series.values};
  out.values.array().colwise() *= params.scale.array();
  out.values.colwise() += params.center;
  return out;
}

absl::StatusOr<PopulationSplit> SplitUsers(
    const std::vector<std::string>& user_ids, const SplitSizes& sizes,
    uint64_t seed) {
  if (sizes.train < 0 || sizes.val < 0 || sizes.test < 0 || sizes.aux < 0) {
    return absl::InvalidArgumentError("split sizes must be non-negative");
  }
  const size_t needed = static_cast<size_t>(sizes.train) + sizes.val +
                        sizes.test + sizes.aux;
  if (needed > user_ids.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("split sizes need ", needed, " users but population has ",
                     user_ids.size()));
  }
  std::unordered_set<std::string> seen(user_ids.begin(), user_ids.end());
  if (seen.size() != user_ids.size()) {
    return absl::InvalidArgumentError("duplicate user ids in population");
  }

  std::vector<std::string> shuffled = user_ids;
  Rng rng = MakeRng(seed, "split-users");
  std::shuffle(shuffled.begin(), shuffled.end(), rng);

  PopulationSplit split;
  auto take = [&, next = size_t{0}](int n) mutable {
    std::vector<std::string> out(shuffled.begin() + next,
                                 shuffled.begin() + next + n);
    next += n;
    return out;
  };
  split.train_users = take(sizes.train);
  split.val_users = take(sizes.val);
  split.test_users = take(sizes.test);
  split.aux_users = take(sizes.aux);
  return split;
}

}  // namespace tsmia
