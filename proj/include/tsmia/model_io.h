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

#ifndef TSMIA_MODEL_IO_H_
#define TSMIA_MODEL_IO_H_

#include <string>

#include "absl/status/statusor.h"
#include "tsmia/forecaster.h"

namespace tsmia {

// Line-oriented text format, version 1:
//
//   tsmia-model 1
//   kind mlp|ridge
//   shape <M> <L> <H>
//   layers <n0> <n1> ... <nk>
//   ridge_lambda <x>
//   hidden <h1> ... (may be empty)
//   learning_rate <x>
//   max_epochs <n>
//   patience <n>
//   batch_size <n>
//   early_stopping 0|1
//   seed <n>
//   history <count>
//   <epoch> <train_loss> <val_loss>      (count lines)
//   parameters <count>
//   <value>                              (count lines)
//
// Reals use 17 significant digits, so save/load is bit-exact.
inline constexpr int kModelFormatVersion = 1;

std::string SerializeForecaster(const TrainedForecaster& model);
absl::StatusOr<TrainedForecaster> ParseForecaster(const std::string& text);

absl::Status SaveForecaster(const std::string& path,
                            const TrainedForecaster& model);
absl::StatusOr<TrainedForecaster> LoadForecaster(const std::string& path);

}  // namespace tsmia

#endif  // TSMIA_MODEL_IO_H_
