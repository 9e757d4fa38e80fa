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

#include "tsmia/forecaster.h"

#include <cstdio>
#include <filesystem>

#include "gtest/gtest.h"
#include "test_util.h"
#include "tsmia/model_io.h"

namespace tsmia {
namespace {

using ::tsmia::testing::RandomMatrix;

// Records whose target is an exact affine map of the flattened input.
std::vector<ForecastRecord> LinearRecords(int n, int m, int l, int h,
                                          uint64_t seed, Matrix* map = nullptr,
                                          Vector* offset = nullptr) {
  std::mt19937_64 rng(seed);
  const Matrix a = RandomMatrix(m * h, m * l, rng, -0.5, 0.5);
  const Vector c = RandomMatrix(m * h, 1, rng);
  std::vector<ForecastRecord> records;
  for (int i = 0; i < n; ++i) {
    ForecastRecord r;
    r.user_id = "u";
    r.origin = i;
    r.input = RandomMatrix(m, l, rng);
    const Vector y = a * r.input.reshaped() + c;
    r.target = y.reshaped(m, h);
    records.push_back(std::move(r));
  }
  if (map != nullptr) *map = a;
  if (offset != nullptr) *offset = c;
  return records;
}

TEST(RidgeTest, RecoversExactLinearMap) {
  Matrix a;
  Vector c;
  const auto records = LinearRecords(60, 2, 5, 3, 1, &a, &c);
  auto model = FitRidge(records, 0.0);
  ASSERT_TRUE(model.ok()) << model.status();
  EXPECT_LT((model->network.weights(0) - a).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_LT((model->network.bias(0) - c).cwiseAbs().maxCoeff(), 1e-9);
  auto metrics = Evaluate(*model, records);
  ASSERT_TRUE(metrics.ok());
  EXPECT_LT(metrics->mse, 1e-18);
  for (const ForecastRecord& r : records) {
    auto y_hat = Predict(*model, r.input);
    ASSERT_TRUE(y_hat.ok());
    EXPECT_LT((*y_hat - r.target).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(RidgeTest, MatchesDirectLeastSquaresOracle) {
  std::mt19937_64 rng(2);
  std::vector<ForecastRecord> records;
  for (int i = 0; i < 40; ++i) {
    records.push_back({"u", i, RandomMatrix(1, 6, rng), RandomMatrix(1, 2, rng)});
  }
  auto model = FitRidge(records, 0.0);
  ASSERT_TRUE(model.ok());
  // Least squares on the augmented design via complete orthogonal
  // decomposition of the n x (d+1) matrix.
  Matrix design(40, 7);
  Matrix targets(40, 2);
  for (int i = 0; i < 40; ++i) {
    design.row(i).head(6) = records[i].input.reshaped().transpose();
    design(i, 6) = 1.0;
    targets.row(i) = records[i].target.reshaped().transpose();
  }
  const Matrix oracle = design.completeOrthogonalDecomposition().solve(targets);
  EXPECT_LT((model->network.weights(0) - oracle.topRows(6).transpose())
                .cwiseAbs()
                .maxCoeff(),
            1e-9);
  EXPECT_LT((model->network.bias(0) - oracle.row(6).transpose())
                .cwiseAbs()
                .maxCoeff(),
            1e-9);
}

TEST(RidgeTest, SatisfiesNormalEquations) {
  std::mt19937_64 rng(3);
  std::vector<ForecastRecord> records;
  for (int i = 0; i < 30; ++i) {
    records.push_back({"u", i, RandomMatrix(2, 4, rng), RandomMatrix(2, 3, rng)});
  }
  const double lambda = 0.7;
  auto model = FitRidge(records, lambda);
  ASSERT_TRUE(model.ok());
  const Matrix x = FlattenInputs(records);
  const Matrix y = FlattenTargets(records);
  Matrix design(9, 30);
  design.topRows(8) = x;
  design.row(8).setOnes();
  Matrix w(6, 9);
  w.leftCols(8) = model->network.weights(0);
  w.col(8) = model->network.bias(0);
  // Gradient of ||W D - Y||^2 / 2 + lambda/2 ||W_x||^2 must vanish.
  Matrix grad = (w * design - y) * design.transpose();
  grad.leftCols(8) += lambda * w.leftCols(8);
  EXPECT_LT(grad.norm(), 1e-8 * (y.norm() * design.norm()));
}

TEST(RidgeTest, DuplicateFeatureIsSingularWithoutPenalty) {
  std::mt19937_64 rng(4);
  std::vector<ForecastRecord> records;
  for (int i = 0; i < 20; ++i) {
    const Matrix row = RandomMatrix(1, 3, rng);
    Matrix input(2, 3);
    input << row, row;
    records.push_back({"u", i, input, RandomMatrix(2, 1, rng)});
  }
  auto singular = FitRidge(records, 0.0);
  EXPECT_EQ(singular.status().code(), absl::StatusCode::kFailedPrecondition);
  EXPECT_TRUE(FitRidge(records, 1e-6).ok());
  EXPECT_FALSE(FitRidge(records, -1.0).ok());
}

TEST(PredictTest, ZeroWeightsReplicateBias) {
  TrainedForecaster model;
  model.shape = {2, 3, 2};
  model.network = DenseNetwork({6, 4});
  model.network.mutable_bias(0) = Vector{{1.0, 2.0, 3.0, 4.0}};
  std::mt19937_64 rng(5);
  auto y_hat = Predict(model, RandomMatrix(2, 3, rng));
  ASSERT_TRUE(y_hat.ok());
  // Column-major: variable index varies fastest.
  EXPECT_EQ(*y_hat, (Matrix{{1.0, 3.0}, {2.0, 4.0}}));
  EXPECT_FALSE(Predict(model, Matrix::Zero(3, 2)).ok());
  Matrix bad = Matrix::Zero(2, 3);
  bad(0, 0) = std::nan("");
  EXPECT_FALSE(Predict(model, bad).ok());
}

TEST(PredictTest, FlatPredictionMatchesPerRecord) {
  const auto records = LinearRecords(5, 2, 3, 2, 6);
  auto model = FitRidge(records, 0.1);
  ASSERT_TRUE(model.ok());
  const Matrix flat = PredictFlat(*model, FlattenInputs(records));
  for (int i = 0; i < 5; ++i) {
    auto y_hat = Predict(*model, records[i].input);
    ASSERT_TRUE(y_hat.ok());
    EXPECT_EQ(Vector(y_hat->reshaped()), Vector(flat.col(i)));
  }
}

TEST(EvaluateTest, TwoRecordHandExample) {
  TrainedForecaster model;
  model.shape = {1, 1, 2};
  model.network = DenseNetwork({1, 2});  // always predicts 0
  model.network.mutable_bias(0) = Vector{{1.0, 1.0}};  // always predicts 1
  std::vector<ForecastRecord> records = {
      {"a", 0, Matrix{{0.0}}, Matrix{{1.0, 3.0}}},
      {"a", 1, Matrix{{0.0}}, Matrix{{-1.0, 2.0}}},
  };
  auto m = Evaluate(model, records);
  ASSERT_TRUE(m.ok());
  // Record 1: errors {0, 2}; record 2: errors {2, 1}.
  EXPECT_NEAR(m->mse, (2.0 + 2.5) / 2.0, 1e-12);
  EXPECT_NEAR(m->mae, (1.0 + 1.5) / 2.0, 1e-12);
  EXPECT_NEAR(m->smape, ((0.0 + 0.5) / 2.0 + (1.0 + 1.0 / 3.0) / 2.0) / 2.0,
              1e-12);
  EXPECT_NEAR(m->nd, (2.0 / 4.0 + 3.0 / 3.0) / 2.0, 1e-12);
}

TEST(EvaluateTest, NegatedPredictionHasUnitSmape) {
  TrainedForecaster model;
  model.shape = {1, 1, 2};
  model.network = DenseNetwork({1, 2});
  model.network.mutable_weights(0) = Matrix{{-1.0}, {-2.0}};
  std::vector<ForecastRecord> records = {
      {"a", 0, Matrix{{1.5}}, Matrix{{1.5, 3.0}}}};
  auto m = Evaluate(model, records);
  ASSERT_TRUE(m.ok());
  EXPECT_DOUBLE_EQ(m->smape, 1.0);
  EXPECT_DOUBLE_EQ(m->nd, 2.0);
}

TEST(EvaluateTest, AllZeroTargetIsError) {
  TrainedForecaster model;
  model.shape = {1, 1, 1};
  model.network = DenseNetwork({1, 1});
  std::vector<ForecastRecord> records = {{"a", 0, Matrix{{1.0}}, Matrix{{0.0}}}};
  EXPECT_FALSE(Evaluate(model, records).ok());
}

TEST(MlpTest, LearnsConstantTarget) {
  std::mt19937_64 rng(7);
  std::vector<ForecastRecord> train, val;
  for (int i = 0; i < 256; ++i) {
    (i < 200 ? train : val)
        .push_back({"u", i, RandomMatrix(1, 4, rng), Matrix::Constant(1, 2, 0.8)});
  }
  ForecasterConfig cfg;
  cfg.hidden_sizes = {8};
  cfg.batch_size = 4;
  cfg.patience = 50;
  auto model = FitMlp(train, val, cfg);
  ASSERT_TRUE(model.ok()) << model.status();
  auto m = Evaluate(*model, val);
  ASSERT_TRUE(m.ok());
  EXPECT_LT(m->mae, 1e-3);
  EXPECT_LE(static_cast<int>(model->history.size()), cfg.max_epochs);
}

TEST(MlpTest, EarlyStoppingNeedsValidation) {
  const auto records = LinearRecords(10, 1, 3, 2, 8);
  ForecasterConfig cfg;
  EXPECT_FALSE(FitMlp(records, {}, cfg).ok());
  cfg.early_stopping = false;
  cfg.max_epochs = 3;
  auto model = FitMlp(records, {}, cfg);
  ASSERT_TRUE(model.ok());
  EXPECT_EQ(model->history.size(), 3u);
}

TEST(MlpTest, SameSeedSameHistory) {
  const auto train = LinearRecords(50, 1, 4, 2, 9);
  const auto val = LinearRecords(10, 1, 4, 2, 10);
  ForecasterConfig cfg;
  cfg.max_epochs = 4;
  cfg.batch_size = 8;
  cfg.seed = 3;
  auto a = FitForecaster(cfg, train, val);
  auto b = FitForecaster(cfg, train, val);
  ASSERT_TRUE(a.ok() && b.ok());
  ASSERT_EQ(a->history.size(), b->history.size());
  for (size_t i = 0; i < a->history.size(); ++i) {
    EXPECT_EQ(a->history[i].train_loss, b->history[i].train_loss);
    EXPECT_EQ(a->history[i].val_loss, b->history[i].val_loss);
  }
  EXPECT_EQ(a->network.parameters(), b->network.parameters());
}

TEST(ConfigTest, RejectsInvalidValues) {
  ForecasterConfig cfg;
  EXPECT_TRUE(ValidateForecasterConfig(cfg).ok());
  cfg.ridge_lambda = -1;
  EXPECT_FALSE(ValidateForecasterConfig(cfg).ok());
  cfg = ForecasterConfig();
  cfg.hidden_sizes = {4, 0};
  EXPECT_FALSE(ValidateForecasterConfig(cfg).ok());
  cfg = ForecasterConfig();
  cfg.patience = 0;
  EXPECT_FALSE(ValidateForecasterConfig(cfg).ok());
}

TEST(ModelIoTest, RoundTripIsBitExact) {
  const auto train = LinearRecords(30, 2, 3, 2, 11);
  const auto val = LinearRecords(8, 2, 3, 2, 12);
  ForecasterConfig cfg;
  cfg.hidden_sizes = {5, 3};
  cfg.max_epochs = 3;
  cfg.batch_size = 4;
  cfg.seed = 77;
  auto model = FitForecaster(cfg, train, val);
  ASSERT_TRUE(model.ok());
  const std::string text = SerializeForecaster(*model);
  auto parsed = ParseForecaster(text);
  ASSERT_TRUE(parsed.ok()) << parsed.status();
  EXPECT_EQ(parsed->network.parameters(), model->network.parameters());
  EXPECT_EQ(parsed->network.layer_sizes(), model->network.layer_sizes());
  EXPECT_EQ(parsed->shape, model->shape);
  EXPECT_EQ(parsed->config.seed, 77u);
  EXPECT_EQ(parsed->config.hidden_sizes, cfg.hidden_sizes);
  ASSERT_EQ(parsed->history.size(), model->history.size());
  EXPECT_EQ(parsed->history.back().val_loss, model->history.back().val_loss);
  EXPECT_EQ(SerializeForecaster(*parsed), text);

  const std::string path =
      (std::filesystem::temp_directory_path() / "tsmia_model_io_test.txt")
          .string();
  ASSERT_TRUE(SaveForecaster(path, *model).ok());
  auto loaded = LoadForecaster(path);
  ASSERT_TRUE(loaded.ok());
  EXPECT_EQ(SerializeForecaster(*loaded), text);
  std::remove(path.c_str());
}

TEST(ModelIoTest, RidgeRoundTrip) {
  auto model = FitRidge(LinearRecords(20, 1, 3, 2, 13), 0.5);
  ASSERT_TRUE(model.ok());
  auto parsed = ParseForecaster(SerializeForecaster(*model));
  ASSERT_TRUE(parsed.ok());
  EXPECT_EQ(parsed->config.kind, ForecasterKind::kRidge);
  EXPECT_EQ(parsed->network.parameters(), model->network.parameters());
}

TEST(ModelIoTest, RejectsCorruptInput) {
  auto model = FitRidge(LinearRecords(20, 1, 3, 2, 14), 0.5);
  ASSERT_TRUE(model.ok());
  const std::string text = SerializeForecaster(*model);
  EXPECT_FALSE(ParseForecaster("").ok());
  EXPECT_FALSE(ParseForecaster("tsmia-model 99\n").ok());
  EXPECT_FALSE(ParseForecaster(text.substr(0, text.size() / 2)).ok());
}

}  // namespace
}  // namespace tsmia
