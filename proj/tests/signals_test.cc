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

#include <cmath>

#include "gtest/gtest.h"
#include "test_util.h"

namespace tsmia {
namespace {

using ::tsmia::testing::NaiveDft2d;
using ::tsmia::testing::NaiveMetrics;
using ::tsmia::testing::NaiveOracle;
using ::tsmia::testing::RandomMatrix;

double Value(const absl::StatusOr<double>& v) {
  EXPECT_TRUE(v.ok()) << v.status();
  return v.ok() ? *v : std::nan("");
}

TEST(ErrorSignalsTest, HandComputedValues) {
  const Matrix y{{1.0, 2.0}};
  const Matrix y_hat{{2.0, 4.0}};
  EXPECT_DOUBLE_EQ(Value(Mse(y, y_hat)), 2.5);
  EXPECT_DOUBLE_EQ(Value(Mae(y, y_hat)), 1.5);
  EXPECT_DOUBLE_EQ(Value(Nd(y, y_hat)), 1.0);
  EXPECT_DOUBLE_EQ(Value(Mse(Matrix{{0.0, 0.0}}, Matrix{{1.0, 1.0}})), 1.0);
  EXPECT_DOUBLE_EQ(Value(Mae(Matrix{{0.0, 0.0}}, Matrix{{1.0, 1.0}})), 1.0);
  EXPECT_DOUBLE_EQ(Value(Smape(Matrix{{1.0, 3.0}}, Matrix{{2.0, 3.0}})),
                   1.0 / 6.0);
}

TEST(ErrorSignalsTest, SmapeEdgeCases) {
  const Matrix y{{1.0, -2.0, 3.5}};
  EXPECT_EQ(Value(Smape(y, y)), 0.0);
  EXPECT_DOUBLE_EQ(Value(Smape(y, -y)), 1.0);
  // 0/0 terms count as zero.
  EXPECT_EQ(Value(Smape(Matrix::Zero(2, 3), Matrix::Zero(2, 3))), 0.0);
}

TEST(ErrorSignalsTest, RsmapeLogitAndClamp) {
  EXPECT_DOUBLE_EQ(RsmapeFromSmape(0.5), 0.0);
  EXPECT_NEAR(RsmapeFromSmape(0.75), std::log(3.0), 1e-15);
  // Clamped at 1e-9 and 1 - 1e-9 (the latter rounded to double).
  EXPECT_NEAR(RsmapeFromSmape(0.0), -20.72326583594641, 1e-12);
  EXPECT_NEAR(RsmapeFromSmape(1.0), 20.723265864228342, 1e-12);
  EXPECT_NEAR(Value(Rsmape(Matrix{{1.0, 3.0}}, Matrix{{-1.0, 1.0}})),
              std::log(3.0), 1e-15);
  const Matrix y{{1.0, 2.0}};
  EXPECT_DOUBLE_EQ(Value(Rsmape(y, y)), RsmapeFromSmape(0.0));
}

TEST(ErrorSignalsTest, NdEdgeCases) {
  const Matrix y{{1.0, -2.0}};
  EXPECT_EQ(Value(Nd(y, y)), 0.0);
  EXPECT_DOUBLE_EQ(Value(Nd(y, Matrix::Zero(1, 2))), 1.0);
  EXPECT_EQ(Nd(Matrix::Zero(1, 2), y).status().code(),
            absl::StatusCode::kFailedPrecondition);
}

TEST(ErrorSignalsTest, ShapeMismatchIsError) {
  const Matrix a = Matrix::Ones(1, 3);
  const Matrix b = Matrix::Ones(2, 3);
  for (SignalId id : AllSignals()) {
    EXPECT_FALSE(ComputeSignal(id, a, b).ok()) << SignalName(id);
  }
}

TEST(ErrorSignalsTest, MatchNaiveOracleOnRandomInstances) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> dim(1, 5);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix y = RandomMatrix(dim(rng), dim(rng), rng);
    const Matrix y_hat = RandomMatrix(y.rows(), y.cols(), rng);
    const NaiveMetrics oracle = NaiveOracle(y, y_hat);
    EXPECT_NEAR(Value(Mse(y, y_hat)), oracle.mse, 1e-12);
    EXPECT_NEAR(Value(Mae(y, y_hat)), oracle.mae, 1e-12);
    EXPECT_NEAR(Value(Smape(y, y_hat)), oracle.smape, 1e-12);
    EXPECT_NEAR(Value(Nd(y, y_hat)), oracle.nd, 1e-12);
    const double s = std::clamp(oracle.smape, 1e-9, 1 - 1e-9);
    EXPECT_NEAR(Value(Rsmape(y, y_hat)), std::log(s) - std::log1p(-s), 1e-12);
  }
}

TEST(ErrorSignalsTest, SmapeIsScaleInvariant) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> scale(-50.0, 50.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix y = RandomMatrix(2, 6, rng);
    const Matrix y_hat = RandomMatrix(2, 6, rng);
    double c = scale(rng);
    if (std::abs(c) < 1e-3) c = 1.0;
    EXPECT_NEAR(Value(Smape(c * y, c * y_hat)), Value(Smape(y, y_hat)), 1e-12);
  }
}

TEST(TrendSignalTest, UnitSlopeAgainstZero) {
  const int h = 8;
  Matrix y(1, h);
  for (int k = 0; k < h; ++k) y(0, k) = static_cast<double>(k) / (h - 1);
  EXPECT_NEAR(Value(TrendSignal(y, Matrix::Zero(1, h), 1)), 1.0, 1e-12);
  EXPECT_EQ(Value(TrendSignal(y, y, 1)), 0.0);
}

TEST(TrendSignalTest, RecoversExactLine) {
  const int h = 12;
  Matrix y(2, h);
  for (int k = 0; k < h; ++k) {
    const double t = static_cast<double>(k) / (h - 1);
    y(0, k) = -0.75 + 3.25 * t;
    y(1, k) = 4.0 - 2.0 * t;
  }
  auto coef = FitTrendCoefficients(y, 1);
  ASSERT_TRUE(coef.ok());
  EXPECT_NEAR((*coef)(0, 0), -0.75, 1e-10);
  EXPECT_NEAR((*coef)(1, 0), 3.25, 1e-10);
  EXPECT_NEAR((*coef)(0, 1), 4.0, 1e-10);
  EXPECT_NEAR((*coef)(1, 1), -2.0, 1e-10);
}

TEST(TrendSignalTest, IllPosedFitIsError) {
  EXPECT_FALSE(TrendSignal(Matrix::Ones(1, 2), Matrix::Zero(1, 2), 2).ok());
  EXPECT_FALSE(TrendSignal(Matrix::Ones(1, 1), Matrix::Zero(1, 1), 1).ok());
}

// Closed-form simple linear regression per row.
double TrendOracleDegreeOne(const Matrix& y, const Matrix& y_hat) {
  const Eigen::Index h = y.cols();
  double total = 0;
  for (Eigen::Index v = 0; v < y.rows(); ++v) {
    double fit[2][2];
    for (int which = 0; which < 2; ++which) {
      const Matrix& s = which == 0 ? y : y_hat;
      double t_mean = 0, s_mean = 0;
      for (Eigen::Index k = 0; k < h; ++k) {
        t_mean += static_cast<double>(k) / (h - 1) / h;
        s_mean += s(v, k) / h;
      }
      double cov = 0, var = 0;
      for (Eigen::Index k = 0; k < h; ++k) {
        const double dt = static_cast<double>(k) / (h - 1) - t_mean;
        cov += dt * (s(v, k) - s_mean);
        var += dt * dt;
      }
      fit[which][1] = cov / var;
      fit[which][0] = s_mean - fit[which][1] * t_mean;
    }
    total += std::hypot(fit[0][0] - fit[1][0], fit[0][1] - fit[1][1]);
  }
  return total / static_cast<double>(y.rows());
}

TEST(TrendSignalTest, MatchesClosedFormOracleOnRandomInstances) {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<int> rows(1, 4);
  std::uniform_int_distribution<int> cols(2, 20);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix y = RandomMatrix(rows(rng), cols(rng), rng);
    const Matrix y_hat = RandomMatrix(y.rows(), y.cols(), rng);
    EXPECT_NEAR(Value(TrendSignal(y, y_hat, 1)), TrendOracleDegreeOne(y, y_hat),
                1e-9);
  }
}

TEST(SeasonalitySignalTest, ConstantsOnlyHaveDcEnergy) {
  const Matrix y = Matrix::Constant(2, 5, 3.0);
  const Matrix y_hat = Matrix::Constant(2, 5, 1.25);
  const Eigen::MatrixXcd spectrum = Dft2d(y);
  EXPECT_NEAR(std::abs(spectrum(0, 0)), 30.0, 1e-12);
  EXPECT_LT(spectrum.cwiseAbs().sum() - 30.0, 1e-9);
  EXPECT_NEAR(Value(SeasonalitySignal(y, y_hat)), 10.0 * (3.0 - 1.25), 1e-12);
  EXPECT_EQ(Value(SeasonalitySignal(y, y)), 0.0);
}

TEST(SeasonalitySignalTest, MatchesNaiveDftOnRandomInstances) {
  std::mt19937_64 rng(14);
  std::uniform_int_distribution<int> rows(1, 4);
  std::uniform_int_distribution<int> cols(1, 12);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix y = RandomMatrix(trial == 0 ? 2 : rows(rng),
                                  trial == 0 ? 4 : cols(rng), rng);
    const Matrix y_hat = RandomMatrix(y.rows(), y.cols(), rng);
    const Eigen::MatrixXcd fast = Dft2d(y);
    const Eigen::MatrixXcd naive = NaiveDft2d(y);
    EXPECT_LT((fast - naive).cwiseAbs().maxCoeff(), 1e-9);
    const double oracle =
        (NaiveDft2d(y).cwiseAbs() - NaiveDft2d(y_hat).cwiseAbs()).norm();
    EXPECT_NEAR(Value(SeasonalitySignal(y, y_hat)), oracle, 1e-9);
    // Parseval.
    const double energy = y.squaredNorm();
    const double spectral = fast.cwiseAbs2().sum() / static_cast<double>(y.size());
    EXPECT_NEAR(energy, spectral, 1e-9);
  }
}

TEST(EmbeddingSignalTest, DefaultEmbedderHandExample) {
  const Matrix y{{1.0, 2.0, 3.0, 4.0}};
  const Matrix y_hat = Matrix::Zero(1, 4);
  // (mean, std, mean diff) = (2.5, sqrt(1.25), 1) vs (0, 0, 0).
  EXPECT_NEAR(Value(EmbeddingSignal(y, y_hat, DefaultEmbedding)),
              std::sqrt(8.5), 1e-12);
  EXPECT_EQ(Value(EmbeddingSignal(y, y, DefaultEmbedding)), 0.0);
}

TEST(EmbeddingSignalTest, IdentityEmbedderIsElementwiseDistance) {
  std::mt19937_64 rng(15);
  const Matrix y = RandomMatrix(3, 5, rng);
  const Matrix y_hat = RandomMatrix(3, 5, rng);
  Embedder flatten = [](const Matrix& m) { return Vector(m.reshaped()); };
  EXPECT_NEAR(Value(EmbeddingSignal(y, y_hat, flatten)), (y - y_hat).norm(),
              1e-12);
}

TEST(EmbeddingSignalTest, DimensionMismatchIsError) {
  Embedder bad = [](const Matrix& m) {
    return Vector::Zero(m(0, 0) > 0 ? 2 : 3).eval();
  };
  EXPECT_FALSE(
      EmbeddingSignal(Matrix::Ones(1, 2), -Matrix::Ones(1, 2), bad).ok());
}

TEST(SignalVectorTest, SingleSignalAndCanonicalOrder) {
  const Matrix y{{1.0, 2.0, 0.5}};
  auto v = ComputeSignalVector(y, y, {SignalId::kMse});
  ASSERT_TRUE(v.ok());
  ASSERT_EQ(v->values.size(), 1);
  EXPECT_EQ(v->values(0), 0.0);

  const Matrix y_hat{{0.5, 2.5, 1.0}};
  auto a = ComputeSignalVector(y, y_hat,
                               {SignalId::kTrend, SignalId::kMse, SignalId::kNd});
  auto b = ComputeSignalVector(y, y_hat,
                               {SignalId::kNd, SignalId::kTrend, SignalId::kMse,
                                SignalId::kMse});
  ASSERT_TRUE(a.ok() && b.ok());
  EXPECT_EQ(a->ids, b->ids);
  EXPECT_EQ(a->values, b->values);
  EXPECT_EQ(a->ids.front(), SignalId::kMse);
}

TEST(SignalVectorTest, FullSetEqualsElementwiseApplication) {
  std::mt19937_64 rng(16);
  const Matrix y = RandomMatrix(2, 6, rng);
  const Matrix y_hat = RandomMatrix(2, 6, rng);
  auto v = ComputeSignalVector(y, y_hat, AllSignals());
  ASSERT_TRUE(v.ok());
  ASSERT_EQ(v->values.size(), kNumSignals);
  for (int k = 0; k < kNumSignals; ++k) {
    EXPECT_EQ(v->values(k), Value(ComputeSignal(v->ids[k], y, y_hat)));
  }
}

TEST(SignalVectorTest, PerfectForecastIsAtFloor) {
  std::mt19937_64 rng(17);
  const Matrix y = RandomMatrix(3, 7, rng);
  auto v = ComputeSignalVector(y, y, AllSignals());
  ASSERT_TRUE(v.ok());
  for (int k = 0; k < kNumSignals; ++k) {
    if (v->ids[k] == SignalId::kRsmape) {
      EXPECT_EQ(v->values(k), RsmapeFromSmape(0.0));
    } else {
      EXPECT_EQ(v->values(k), 0.0) << SignalName(v->ids[k]);
    }
  }
}

TEST(SignalVectorTest, NonRsmapeSignalsAreNonNegative) {
  std::mt19937_64 rng(18);
  for (int trial = 0; trial < 50; ++trial) {
    auto v = ComputeSignalVector(RandomMatrix(2, 5, rng),
                                 RandomMatrix(2, 5, rng), AllSignals());
    ASSERT_TRUE(v.ok());
    for (int k = 0; k < kNumSignals; ++k) {
      if (v->ids[k] != SignalId::kRsmape) {
        EXPECT_GE(v->values(k), 0.0);
      }
    }
  }
}

TEST(SignalNamesTest, RoundTrip) {
  for (SignalId id : AllSignals()) {
    EXPECT_EQ(ParseSignalName(SignalName(id)), id);
  }
  EXPECT_FALSE(ParseSignalName("ts2vec").has_value());
}

}  // namespace
}  // namespace tsmia
