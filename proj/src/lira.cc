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

#include "tsmia/lira.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "absl/strings/str_cat.h"

namespace tsmia {
namespace {

constexpr double kHalfLogTwoPi = 0.91893853320467274178;

struct GroupStats {
  Matrix mean;
  Matrix variance;  // population convention
};

GroupStats FitGroup(const SignalTensor& tensor,
                    const MembershipMatrix& membership, bool in_group) {
  const int n = tensor.num_records;
  const int s = tensor.num_signals();
  const int shadows = tensor.num_models - 1;
  GroupStats g{Matrix::Zero(n, s), Matrix::Zero(n, s)};
  for (int r = 0; r < n; ++r) {
    int count = 0;
    for (int i = 0; i < shadows; ++i) {
      if (membership.at(r, i) != in_group) continue;
      ++count;
      for (int k = 0; k < s; ++k) g.mean(r, k) += tensor.at(r, i, k);
    }
    g.mean.row(r) /= static_cast<double>(count);
    for (int i = 0; i < shadows; ++i) {
      if (membership.at(r, i) != in_group) continue;
      for (int k = 0; k < s; ++k) {
        const double d = tensor.at(r, i, k) - g.mean(r, k);
        g.variance(r, k) += d * d;
      }
    }
    g.variance.row(r) /= static_cast<double>(count);
  }
  return g;
}

Matrix Sigma(const GroupStats& g, const GaussianFitOptions& options) {
  Matrix variance = g.variance;
  if (options.variance_mode == VarianceMode::kGlobal) {
    const Eigen::RowVectorXd pooled = variance.colwise().mean();
    variance.rowwise() = pooled;
  }
  return variance.cwiseSqrt().cwiseMax(options.sigma_floor);
}

}  // namespace

absl::StatusOr<GaussianSignalModel> FitGaussianModel(
    const SignalTensor& tensor, const MembershipMatrix& membership,
    AttackMode mode, const GaussianFitOptions& options) {
  const int shadows = tensor.num_models - 1;
  if (membership.records() != tensor.num_records ||
      membership.models() != shadows) {
    return absl::InvalidArgumentError(absl::StrCat(
        "membership is ", membership.records(), "x", membership.models(),
        ", tensor has ", tensor.num_records, " records and ", shadows,
        " shadows"));
  }
  if (!(options.sigma_floor > 0.0)) {
    return absl::InvalidArgumentError("sigma floor must be > 0");
  }
  for (int r = 0; r < tensor.num_records; ++r) {
    const int in = membership.InCount(r);
    if (mode == AttackMode::kOnline && (in == 0 || in == shadows)) {
      return absl::FailedPreconditionError(absl::StrCat(
          "record ", tensor.record_ids[r], " has ", in, " in-models of ",
          shadows, "; online fits need both groups"));
    }
    if (mode == AttackMode::kOffline && in == shadows) {
      return absl::FailedPreconditionError(absl::StrCat(
          "record ", tensor.record_ids[r], " has no out-models"));
    }
  }
  GaussianSignalModel model;
  model.signals = tensor.signals;
  model.variance_mode = options.variance_mode;
  const GroupStats out = FitGroup(tensor, membership, false);
  model.mu_out = out.mean;
  model.sigma_out = Sigma(out, options);
  if (mode == AttackMode::kOnline) {
    const GroupStats in = FitGroup(tensor, membership, true);
    model.has_in = true;
    model.mu_in = in.mean;
    model.sigma_in = Sigma(in, options);
  }
  return model;
}

double LogNormalPdf(double x, double mu, double sigma) {
  const double z = (x - mu) / sigma;
  return -0.5 * z * z - std::log(sigma) - kHalfLogTwoPi;
}

double LogStandardNormalCdf(double z) {
  if (z > -35.0) return std::log(0.5 * std::erfc(-z / std::numbers::sqrt2));
  // Asymptotic series: Phi(z) = phi(z)/|z| * (1 - 1/z^2 + 3/z^4 - 15/z^6).
  const double inv2 = 1.0 / (z * z);
  const double series = 1.0 - inv2 * (1.0 - 3.0 * inv2 * (1.0 - 5.0 * inv2));
  return -0.5 * z * z - kHalfLogTwoPi - std::log(-z) + std::log(series);
}

double LiraOnlineLogScore(const GaussianSignalModel& model, int record,
                          absl::Span<const double> signals,
                          absl::Span<const int> columns) {
  double total = 0.0;
  for (int k : columns) {
    total += LogNormalPdf(signals[k], model.mu_in(record, k),
                          model.sigma_in(record, k)) -
             LogNormalPdf(signals[k], model.mu_out(record, k),
                          model.sigma_out(record, k));
  }
  return total;
}

double LiraOfflineLogScore(const GaussianSignalModel& model, int record,
                           absl::Span<const double> signals,
                           absl::Span<const int> columns, bool orient) {
  double total = 0.0;
  for (int k : columns) {
    const double z =
        (signals[k] - model.mu_out(record, k)) / model.sigma_out(record, k);
    total += LogStandardNormalCdf(orient ? -z : z);
  }
  return total;
}

absl::StatusOr<std::vector<double>> LiraScores(
    const GaussianSignalModel& model, const SignalTensor& tensor,
    AttackMode mode, absl::Span<const int> records,
    absl::Span<const SignalId> use, bool orient) {
  if (mode == AttackMode::kOnline && !model.has_in) {
    return absl::FailedPreconditionError(
        "online LiRA needs in-model fits");
  }
  if (model.signals != tensor.signals ||
      model.mu_out.rows() != tensor.num_records) {
    return absl::InvalidArgumentError("Gaussian model does not match tensor");
  }
  std::vector<int> columns;
  if (use.empty()) {
    for (int k = 0; k < tensor.num_signals(); ++k) columns.push_back(k);
  } else {
    for (SignalId id : CanonicalSignalSet({use.begin(), use.end()})) {
      std::optional<int> k = tensor.column(id);
      if (!k) {
        return absl::InvalidArgumentError(absl::StrCat(
            "signal ", SignalName(id), " is not in the signal tensor"));
      }
      columns.push_back(*k);
    }
  }
  std::vector<double> out;
  out.reserve(records.size());
  std::vector<double> target(tensor.num_signals());
  for (int r : records) {
    if (r < 0 || r >= tensor.num_records) {
      return absl::OutOfRangeError(absl::StrCat("record index ", r));
    }
    for (int k = 0; k < tensor.num_signals(); ++k) {
      target[k] = tensor.at(r, tensor.target_index(), k);
    }
    out.push_back(mode == AttackMode::kOnline
                      ? LiraOnlineLogScore(model, r, target, columns)
                      : LiraOfflineLogScore(model, r, target, columns, orient));
  }
  return out;
}

}  // namespace tsmia
