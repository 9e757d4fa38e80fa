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

#ifndef TSMIA_SIGNALS_H_
#define TSMIA_SIGNALS_H_

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include "absl/strings/string_view.h"
#include <vector>

#include "absl/status/statusor.h"
#include "absl/types/span.h"
#include "tsmia/series.h"

namespace tsmia {

// Attack signals computed from a true horizon Y and a forecast Yhat (both
// M x H). The enumeration order is the canonical signal-vector layout.
enum class SignalId {
  kMse = 0,
  kMae,
  kSmape,
  kRsmape,
  kNd,
  kTrend,
  kSeasonality,
  kEmbedding,
};

inline constexpr int kNumSignals = 8;

absl::string_view SignalName(SignalId id);
std::optional<SignalId> ParseSignalName(absl::string_view name);
std::vector<SignalId> AllSignals();

// Deduplicates and sorts into canonical order.
std::vector<SignalId> CanonicalSignalSet(std::vector<SignalId> signals);

// Every signal here measures a discrepancy, so a smaller value means the
// model fits the record better, i.e. looks more like a member.
enum class SignalOrientation { kLowerIsMember, kHigherIsMember };
SignalOrientation OrientationOf(SignalId id);

inline constexpr double kRsmapeClamp = 1e-9;

// Maps M x H to a fixed-length representation.
using Embedder = std::function<Vector(const Matrix&)>;

// Per variable: (mean, population standard deviation, mean first
// difference), concatenated. A lightweight stand-in for a learned encoder.
Vector DefaultEmbedding(const Matrix& horizon);

struct SignalOptions {
  int trend_degree = 1;
  Embedder embedder = DefaultEmbedding;
};

absl::StatusOr<double> Mse(const Matrix& y, const Matrix& y_hat);
absl::StatusOr<double> Mae(const Matrix& y, const Matrix& y_hat);

// Mean of |y - y_hat| / (|y| + |y_hat|); a 0/0 term counts as 0.
absl::StatusOr<double> Smape(const Matrix& y, const Matrix& y_hat);

// log(s / (1 - s)) with s = SMAPE clipped to [1e-9, 1 - 1e-9].
absl::StatusOr<double> Rsmape(const Matrix& y, const Matrix& y_hat);
double RsmapeFromSmape(double smape);

// sum|y - y_hat| / sum|y|; undefined (error) when y is all zero.
absl::StatusOr<double> Nd(const Matrix& y, const Matrix& y_hat);

// Least-squares polynomial coefficients (constant term first) of each row of
// `sequences` over time normalized to [0, 1]. Result is (degree+1) x M.
absl::StatusOr<Matrix> FitTrendCoefficients(const Matrix& sequences,
                                            int degree);

// Mean over variables of the L2 distance between trend coefficient vectors.
absl::StatusOr<double> TrendSignal(const Matrix& y, const Matrix& y_hat,
                                   int degree);

// 2D DFT over the M x H grid:
//   X[p, q] = sum_{m, h} x[m, h] * exp(-2 pi i (p m / M + q h / H)).
// Computed separably (rows, then columns).
Eigen::MatrixXcd Dft2d(const Matrix& x);

// L2 distance between the DFT magnitude spectra of y and y_hat.
absl::StatusOr<double> SeasonalitySignal(const Matrix& y, const Matrix& y_hat);

absl::StatusOr<double> EmbeddingSignal(const Matrix& y, const Matrix& y_hat,
                                       const Embedder& embedder);

absl::StatusOr<double> ComputeSignal(SignalId id, const Matrix& y,
                                     const Matrix& y_hat,
                                     const SignalOptions& options = {});

// Values of `signals` (canonicalized) for one (y, y_hat) pair.
struct SignalVector {
  std::vector<SignalId> ids;
  Vector values;
};

absl::StatusOr<SignalVector> ComputeSignalVector(
    const Matrix& y, const Matrix& y_hat, std::vector<SignalId> signals,
    const SignalOptions& options = {});

}  // namespace tsmia

#endif  // TSMIA_SIGNALS_H_
