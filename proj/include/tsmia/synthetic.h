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

#ifndef TSMIA_SYNTHETIC_H_
#define TSMIA_SYNTHETIC_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "tsmia/series.h"

namespace tsmia {

// Closed interval [lo, hi]; lo == hi pins the parameter.
struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

// Each user draws its own parameters once, so records of one user are
// correlated and users differ from one another:
//
//   x_v(t) = amplitude * sin(2*pi*frequency*t + phase) + slope * t + noise
//
// with noise ~ N(0, sigma^2) i.i.d. and t in steps. Every variable v gets an
// independent draw.
struct SyntheticPopulationConfig {
  int users = 100;
  int length = 1000;
  int variables = 1;
  Range amplitude{0.5, 2.0};
  Range frequency{0.01, 0.1};  // cycles per step
  Range phase{0.0, 6.283185307179586};
  Range trend_slope{-1e-3, 1e-3};
  Range noise_sigma{0.05, 0.2};
  uint64_t seed = 0;
};

absl::Status ValidateSyntheticConfig(const SyntheticPopulationConfig& cfg);

// Users are named "u000", "u001", ...; user u is generated from the stream
// DeriveSeed(cfg.seed, "synthetic-user", u).
absl::StatusOr<std::vector<UserSeries>> GeneratePopulation(
    const SyntheticPopulationConfig& cfg);

std::string SyntheticUserId(int index);

}  // namespace tsmia

#endif  // TSMIA_SYNTHETIC_H_
