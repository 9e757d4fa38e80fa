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

#ifndef TSMIA_SHADOW_H_
#define TSMIA_SHADOW_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "absl/types/span.h"
#include "tsmia/forecaster.h"
#include "tsmia/series.h"
#include "tsmia/signals.h"

namespace tsmia {

enum class AttackMode { kOnline, kOffline };

absl::string_view AttackModeName(AttackMode mode);
std::optional<AttackMode> ParseAttackMode(absl::string_view name);

using RecordsByUser = std::map<std::string, std::vector<ForecastRecord>>;

// Per-shadow user subsets. Each subset is split into users the shadow trains
// on and users it holds out for early stopping; membership is defined by the
// training users only.
struct ShadowPlan {
  AttackMode mode = AttackMode::kOnline;
  uint64_t seed = 0;
  std::vector<std::vector<std::string>> training_users;    // sorted
  std::vector<std::vector<std::string>> validation_users;  // sorted
  int repairs = 0;  // swaps applied by the online coverage guard

  int num_models() const { return static_cast<int>(training_users.size()); }
  std::vector<std::string> Subset(int shadow) const;
  bool TrainsOn(int shadow, const std::string& user) const;
};

struct ShadowPlanOptions {
  // Fraction of the aux users drawn per offline shadow.
  double offline_fraction = 0.5;
  // Fraction of each subset held out for shadow early stopping; 0 disables.
  double validation_fraction = 0.0;
};

// Online: subsets of ceil(|train u test| / 2) users from train u test, then
// repaired so every pool user is trained on by >= 1 and left out of >= 1
// shadow. Offline: subsets of ceil(offline_fraction * |aux|) aux users.
absl::StatusOr<ShadowPlan> PlanShadows(const PopulationSplit& split,
                                       AttackMode mode, int num_models,
                                       uint64_t seed,
                                       const ShadowPlanOptions& options = {});

// Row r, column i: record r's user is a training user of shadow i.
class MembershipMatrix {
 public:
  MembershipMatrix() = default;
  MembershipMatrix(int records, int models);

  int records() const { return records_; }
  int models() const { return models_; }
  bool at(int record, int model) const {
    return data_[static_cast<size_t>(record) * models_ + model] != 0;
  }
  void set(int record, int model, bool in) {
    data_[static_cast<size_t>(record) * models_ + model] = in ? 1 : 0;
  }
  int InCount(int record) const;

 private:
  int records_ = 0;
  int models_ = 0;
  std::vector<unsigned char> data_;
};

MembershipMatrix BuildMembership(const ShadowPlan& plan,
                                 absl::Span<const ForecastRecord> records);

struct ShadowEnsemble {
  ShadowPlan plan;
  std::vector<TrainedForecaster> models;
};

// Trains shadow i on the records of plan.training_users[i] with the target's
// configuration and seed DeriveSeed(plan.seed, "shadow", i).
absl::StatusOr<ShadowEnsemble> TrainShadowEnsemble(
    const ShadowPlan& plan, const RecordsByUser& records,
    const ForecasterConfig& target_config, int jobs = 1);

std::string RecordId(const ForecastRecord& record);

// values[(record * num_models + model) * signals.size() + k]; the target is
// the last model.
struct SignalTensor {
  std::vector<SignalId> signals;
  std::vector<std::string> record_ids;
  int num_records = 0;
  int num_models = 0;
  std::vector<double> values;

  int target_index() const { return num_models - 1; }
  int num_signals() const { return static_cast<int>(signals.size()); }
  double at(int record, int model, int k) const {
    return values[(static_cast<size_t>(record) * num_models + model) *
                      signals.size() +
                  k];
  }
  std::optional<int> column(SignalId id) const;
};

// Flattened predictions ((M*H) x records) of one model.
Matrix PredictRecords(const TrainedForecaster& model,
                      absl::Span<const ForecastRecord> records);

// `predictions` holds one matrix per model, the target last.
absl::StatusOr<SignalTensor> ComputeSignalTensor(
    absl::Span<const Matrix> predictions,
    absl::Span<const ForecastRecord> records, std::vector<SignalId> signals,
    const SignalOptions& options = {}, int jobs = 1);

absl::StatusOr<SignalTensor> ComputeSignalTensor(
    const ShadowEnsemble& ensemble, const TrainedForecaster& target,
    absl::Span<const ForecastRecord> records, std::vector<SignalId> signals,
    const SignalOptions& options = {}, int jobs = 1);

// Columnar text: header "record_id,model_index,signal_id,value".
std::string FormatSignalTensor(const SignalTensor& tensor);

// Prediction cache text: one "model rows cols" header then values per line.
std::string FormatPredictions(absl::Span<const Matrix> predictions);
absl::StatusOr<std::vector<Matrix>> ParsePredictions(const std::string& text);

// Cache directory: shadow_<i>.model files and manifest.json holding the plan
// and `digest`. Loading fails with NotFound on a missing or stale cache.
absl::Status SaveShadowEnsemble(const std::string& dir,
                                const ShadowEnsemble& ensemble,
                                const std::string& digest);
absl::StatusOr<ShadowEnsemble> LoadShadowEnsemble(const std::string& dir,
                                                  const std::string& digest);

}  // namespace tsmia

#endif  // TSMIA_SHADOW_H_
