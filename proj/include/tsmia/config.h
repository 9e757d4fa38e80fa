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

#ifndef TSMIA_CONFIG_H_
#define TSMIA_CONFIG_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "tsmia/dts.h"
#include "tsmia/ensemble_attack.h"
#include "tsmia/forecaster.h"
#include "tsmia/lira.h"
#include "tsmia/rmia.h"
#include "tsmia/series.h"
#include "tsmia/shadow.h"
#include "tsmia/signals.h"
#include "tsmia/synthetic.h"

namespace tsmia {

// Experiment configuration file, one "key = value" per line; '#' starts a
// comment. Lists are comma separated, ranges are "lo,hi", booleans are
// true|false. The first key must be "schema = tsmia-config/1". Every key is
// optional except the schema; unknown and repeated keys are errors.
//
//   data.source            synthetic | csv
//   data.csv_path          population file for data.source = csv
//   synth.users, synth.length, synth.variables, synth.seed
//   synth.amplitude, synth.frequency, synth.phase, synth.trend_slope,
//   synth.noise_sigma      ranges
//   window.lookback, window.horizon, window.stride
//   split.train, split.val, split.test, split.aux    user counts
//   forecaster.kind        mlp | ridge
//   forecaster.hidden      hidden layer widths
//   forecaster.learning_rate, forecaster.max_epochs, forecaster.patience,
//   forecaster.batch_size, forecaster.early_stopping, forecaster.ridge_lambda
//   shadow.modes           subset of online,offline
//   shadow.models          K
//   shadow.offline_fraction, shadow.validation_fraction
//   signals                subset of mse,mae,smape,rsmape,nd,trend,
//                          seasonality,embedding
//   signals.trend_degree
//   attacks                subset of lira,rmia,ensemble,dts
//   lira.single_signal     also run one LiRA per signal
//   lira.variance          per-example | global
//   lira.sigma_floor
//   rmia.gamma, rmia.alpha, rmia.population
//   ensemble.executions, ensemble.repetitions, ensemble.subset_size,
//   ensemble.combinations, ensemble.holdout_fraction
//   dts.fraction, dts.hidden, dts.learning_rate, dts.max_epochs,
//   dts.patience, dts.batch_size, dts.validation_fraction
//   game.record_samples    audit records per class
//   game.user_samples      audit users per class; 0 = all train/test users
//   game.records_per_user  records per audited user; 0 = all
//   seeds                  experiment seeds, one report each
inline constexpr char kConfigSchema[] = "tsmia-config/1";

struct ExperimentConfig {
  std::string data_source = "synthetic";
  std::string csv_path;
  SyntheticPopulationConfig synthetic;
  int lookback = 50;
  int horizon = 10;
  int stride = 1;
  SplitSizes split{20, 4, 20, 16};
  ForecasterConfig forecaster;
  std::vector<AttackMode> modes = {AttackMode::kOnline, AttackMode::kOffline};
  int shadow_models = 16;
  double offline_fraction = 0.5;
  double shadow_validation_fraction = 0.2;
  std::vector<SignalId> signals = AllSignals();
  int trend_degree = 1;
  std::vector<std::string> attacks = {"lira", "rmia", "ensemble", "dts"};
  bool lira_single_signal = true;
  VarianceMode lira_variance = VarianceMode::kPerExample;
  double lira_sigma_floor = 1e-6;
  RmiaConfig rmia;
  int rmia_population = 200;
  EnsembleConfig ensemble;
  double dts_fraction = 0.1;
  DtsConfig dts;
  int record_samples = 100;
  int user_samples = 0;
  int records_per_user = 0;
  std::vector<uint64_t> seeds = {0};

  bool HasAttack(const std::string& name) const;
};

ExperimentConfig DefaultExperimentConfig();

absl::StatusOr<ExperimentConfig> ParseExperimentConfig(const std::string& text);
absl::StatusOr<ExperimentConfig> ReadExperimentConfig(const std::string& path);

// Canonical text listing every key; parsing it yields an equal config.
std::string FormatExperimentConfig(const ExperimentConfig& cfg);

// Rejects inconsistent settings before any work is done.
absl::Status ValidateExperimentConfig(const ExperimentConfig& cfg);

// Hex digests of the canonical text restricted to the keys a stage depends
// on. ConfigDigest covers everything except the seed list.
std::string ConfigDigest(const ExperimentConfig& cfg);
// Data, window, split and forecaster keys.
std::string TargetStageDigest(const ExperimentConfig& cfg);
// Target keys plus the shadow keys.
std::string ShadowStageDigest(const ExperimentConfig& cfg, AttackMode mode);

}  // namespace tsmia

#endif  // TSMIA_CONFIG_H_
