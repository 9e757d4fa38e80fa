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

#include "tsmia/signals.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>

#include "absl/strings/str_cat.h"

namespace tsmia {
namespace {

constexpr std::array<absl::string_view, kNumSignals> kSignalNames = {
    "mse", "mae", "smape", "rsmape", "nd", "trend", "seasonality", "embedding"};

absl::Status CheckShapes(const Matrix& y, const Matrix& y_hat) {
  if (y.rows() != y_hat.rows() || y.cols() != y_hat.cols()) {
    return absl::InvalidArgumentError(
        absl::StrCat("shape mismatch: Y is ", y.rows(), "x", y.cols(),
                     ", Yhat is ", y_hat.rows(), "x", y_hat.cols()));
  }
  if (y.size() == 0) return absl::InvalidArgumentError("empty horizon");
  return absl::OkStatus();
}

// exp(-2 pi i j k / n) for j, k in [0, n), cached per n.
const Eigen::MatrixXcd& DftMatrix(Eigen::Index n) {
  thread_local std::map<Eigen::Index, Eigen::MatrixXcd> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  Eigen::MatrixXcd f(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const double angle =
          -2.0 * std::numbers::pi * static_cast<double>((j * k) % n) /
          static_cast<double>(n);
      f(j, k) = {std::cos(angle), std::sin(angle)};
    }
  }
  return cache.emplace(n, std::move(f)).first->second;
}

}  // namespace

absl::string_view SignalName(SignalId id) {
  return kSignalNames[static_cast<int>(id)];
}

std::optional<SignalId> ParseSignalName(absl::string_view name) {
  for (int i = 0; i < kNumSignals; ++i) {
    if (kSignalNames[i] == name) return static_cast<SignalId>(i);
  }
  return std::nullopt;
}

std::vector<SignalId> AllSignals() {
  std::vector<SignalId> all;
  for (int i = 0; i < kNumSignals; ++i) all.push_back(static_cast<SignalId>(i));
  return all;
}

std::vector<SignalId> CanonicalSignalSet(std::vector<SignalId> signals) {
  std::sort(signals.begin(), signals.end());
  signals.erase(std::unique(signals.begin(), signals.end()), signals.end());
  return signals;
}

SignalOrientation OrientationOf(SignalId) {
  return SignalOrientation::kLowerIsMember;
}

Vector DefaultEmbedding(const Matrix& horizon) {
  const Eigen::Index m = horizon.rows();
  const Eigen::Index h = horizon.cols();
  Vector out(3 * m);
  for (Eigen::Index v = 0; v < m; ++v) {
    const auto row = horizon.row(v);
    const double mean = row.mean();
    const double var = (row.array() - mean).square().mean();
    const double diff_mean =
        h > 1 ? (row(h - 1) - row(0)) / static_cast<double>(h - 1) : 0.0;
    out(3 * v) = mean;
    out(3 * v + 1) = std::sqrt(var);
    out(3 * v + 2) = diff_mean;
  }
  return out;
}

absl::StatusOr<double> Mse(const Matrix& y, const Matrix& y_hat) {
  if (absl::Status s = CheckShapes(y, y_hat); !s.ok()) return s;
  return (y - y_hat).squaredNorm() / static_cast<double>(y.size());
}

absl::StatusOr<double> Mae(const Matrix& y, const Matrix& y_hat) {
  if (absl::Status s = CheckShapes(y, y_hat); !s.ok()) return s;
  return (y - y_hat).cwiseAbs().sum() / static_cast<double>(y.size());
}

absl::StatusOr<double> Smape(const Matrix& y, const Matrix& y_hat) {
  if (absl::Status s = CheckShapes(y, y_hat); !s.ok()) return s;
  double total = 0.0;
  for (Eigen::Index j = 0; j < y.cols(); ++j) {
    for (Eigen::Index i = 0; i < y.rows(); ++i) {
      const double denom = std::abs(y(i, j)) + std::abs(y_hat(i, j));
      if (denom > 0.0) total += std::abs(y(i, j) - y_hat(i, j)) / denom;
    }
  }
  return total / static_cast<double>(y.size());
}

double RsmapeFromSmape(double smape) {
  const double s = std::clamp(smape, kRsmapeClamp, 1.0 - kRsmapeClamp);
  return std::log(s / (1.0 - s));
}

absl::StatusOr<double> Rsmape(const Matrix& y, const Matrix& y_hat) {
  absl::StatusOr<double> smape = Smape(y, y_hat);
  if (!smape.ok()) return smape.status();
  return RsmapeFromSmape(*smape);
}

absl::StatusOr<double> Nd(const Matrix& y, const Matrix& y_hat) {
  if (absl::Status s = CheckShapes(y, y_hat); !s.ok()) return s;
  const double scale = y.cwiseAbs().sum();
  if (!(scale > 0.0)) {
    return absl::FailedPreconditionError(
        "ND is undefined for an all-zero target");
  }
  return (y - y_hat).cwiseAbs().sum() / scale;
}

absl::StatusOr<Matrix> FitTrendCoefficients(const Matrix& sequences,
                                            int degree) {
  const Eigen::Index h = sequences.cols();
  if (degree < 0 || h <= degree) {
    return absl::InvalidArgumentError(
        absl::StrCat("trend fit of degree ", degree, " is ill-posed for H=", h));
  }
  Matrix vandermonde(h, degree + 1);
  for (Eigen::Index k = 0; k < h; ++k) {
    const double t =
        h > 1 ? static_cast<double>(k) / static_cast<double>(h - 1) : 0.0;
    double power = 1.0;
    for (int d = 0; d <= degree; ++d) {
      vandermonde(k, d) = power;
      power *= t;
    }
  }
  return Matrix(vandermonde.colPivHouseholderQr().solve(
      Matrix(sequences.transpose())));
}

absl::StatusOr<double> TrendSignal(const Matrix& y, const Matrix& y_hat,
                                   int degree) {
  if (absl::Status s = CheckShapes(y, y_hat); !s.ok()) return s;
  absl::StatusOr<Matrix> coef_y = FitTrendCoefficients(y, degree);
  if (!coef_y.ok()) return coef_y.status();
  absl::StatusOr<Matrix> coef_hat = FitTrendCoefficients(y_hat, degree);
  if (!coef_hat.ok()) return coef_hat.status();
  return (*coef_y - *coef_hat).colwise().norm().mean();
}

Eigen::MatrixXcd Dft2d(const Matrix& x) {
  const Eigen::MatrixXcd& rows_dft = DftMatrix(x.rows());
  const Eigen::MatrixXcd& cols_dft = DftMatrix(x.cols());
  // The DFT matrix is symmetric, so the column transform is x * F_H.
  return rows_dft * (x.cast<std::complex<double>>() * cols_dft);
}

absl::StatusOr<double> SeasonalitySignal(const Matrix& y, const Matrix& y_hat) {
  if (absl::Status s = CheckShapes(y, y_hat); !s.ok()) return s;
  return (Dft2d(y).cwiseAbs() - Dft2d(y_hat).cwiseAbs()).norm();
}

absl::StatusOr<double> EmbeddingSignal(const Matrix& y, const Matrix& y_hat,
                                       const Embedder& embedder) {
  if (absl::Status s = CheckShapes(y, y_hat); !s.ok()) return s;
  const Vector e_y = embedder(y);
  const Vector e_hat = embedder(y_hat);
  if (e_y.size() != e_hat.size() || e_y.size() == 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("embedder dimension mismatch (", e_y.size(), " vs ",
                     e_hat.size(), ")"));
  }
  return (e_y - e_hat).norm();
}

absl::StatusOr<double> ComputeSignal(SignalId id, const Matrix& y,
                                     const Matrix& y_hat,
                                     const SignalOptions& options) {
  switch (id) {
    case SignalId::kMse:
      return Mse(y, y_hat);
    case SignalId::kMae:
      return Mae(y, y_hat);
    case SignalId::kSmape:
      return Smape(y, y_hat);
    case SignalId::kRsmape:
      return Rsmape(y, y_hat);
    case SignalId::kNd:
      return Nd(y, y_hat);
    case SignalId::kTrend:
      return TrendSignal(y, y_hat, options.trend_degree);
    case SignalId::kSeasonality:
      return SeasonalitySignal(y, y_hat);
    case SignalId::kEmbedding:
      return EmbeddingSignal(y, y_hat, options.embedder);
  }
  return absl::InvalidArgumentError("unknown signal");
}

absl::StatusOr<SignalVector> ComputeSignalVector(
    const Matrix& y, const Matrix& y_hat, std::vector<SignalId> signals,
    const SignalOptions& options) {
  SignalVector out;
  out.ids = CanonicalSignalSet(std::move(signals));
  out.values.resize(static_cast<Eigen::Index>(out.ids.size()));
  for (size_t k = 0; k < out.ids.size(); ++k) {
    absl::StatusOr<double> v = ComputeSignal(out.ids[k], y, y_hat, options);
    if (!v.ok()) {
      return absl::Status(v.status().code(),
                          absl::StrCat(SignalName(out.ids[k]), ": ",
                                       v.status().message()));
    }
    out.values(static_cast<Eigen::Index>(k)) = *v;
  }
  return out;
}

}  // namespace tsmia
