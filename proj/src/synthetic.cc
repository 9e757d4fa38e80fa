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

#include "tsmia/synthetic.h"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "absl/strings/str_cat.h"
#include "tsmia/seeds.h"

namespace tsmia {
namespace {

absl::Status CheckRange(const Range& r, const char* name) {
  if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || r.lo > r.hi) {
    return absl::InvalidArgumentError(
        absl::StrCat("invalid ", name, " range [", r.lo, ", ", r.hi, "]"));
  }
  return absl::OkStatus();
}

double Draw(const Range& r, Rng& rng) {
  if (r.lo == r.hi) return r.lo;
  return std::uniform_real_distribution<double>(r.lo, r.hi)(rng);
}

}  // namespace

absl::Status ValidateSyntheticConfig(const SyntheticPopulationConfig& cfg) {
  if (cfg.users < 1 || cfg.length < 1 || cfg.variables < 1) {
    return absl::InvalidArgumentError(absl::StrCat(
        "synthetic population needs users, length, variables >= 1 (got ",
        cfg.users, ", ", cfg.length, ", ", cfg.variables, ")"));
  }
  for (auto [range, name] :
       {std::pair{&cfg.amplitude, "amplitude"},
        std::pair{&cfg.frequency, "frequency"}, std::pair{&cfg.phase, "phase"},
        std::pair{&cfg.trend_slope, "trend slope"},
        std::pair{&cfg.noise_sigma, "noise sigma"}}) {
    if (absl::Status s = CheckRange(*range, name); !s.ok()) return s;
  }
  if (cfg.noise_sigma.lo < 0.0) {
    return absl::InvalidArgumentError("noise sigma must be >= 0");
  }
  return absl::OkStatus();
}

std::string SyntheticUserId(int index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "u%03d", index);
  return buf;
}

absl::StatusOr<std::vector<UserSeries>> GeneratePopulation(
    const SyntheticPopulationConfig& cfg) {
  if (absl::Status s = ValidateSyntheticConfig(cfg); !s.ok()) return s;

  std::vector<UserSeries> population;
  population.reserve(cfg.users);
  for (int u = 0; u < cfg.users; ++u) {
    Rng rng = MakeRng(cfg.seed, "synthetic-user", static_cast<uint64_t>(u));
    UserSeries series{SyntheticUserId(u), Matrix(cfg.variables, cfg.length)};
    for (int v = 0; v < cfg.variables; ++v) {
      const double amplitude = Draw(cfg.amplitude, rng);
      const double frequency = Draw(cfg.frequency, rng);
      const double phase = Draw(cfg.phase, rng);
      const double slope = Draw(cfg.trend_slope, rng);
      const double sigma = Draw(cfg.noise_sigma, rng);
      std::normal_distribution<double> noise(0.0, 1.0);
      for (int t = 0; t < cfg.length; ++t) {
        const double angle = 2.0 * std::numbers::pi * frequency * t + phase;
        double x = amplitude * std::sin(angle) + slope * t;
        if (sigma > 0.0) x += sigma * noise(rng);
        series.values(v, t) = x;
      }
    }
    population.push_back(std::move(series));
  }
  return population;
}

}  // namespace tsmia
