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

#include "tsmia/rmia.h"

#include <cmath>

#include "absl/strings/str_cat.h"

namespace tsmia {

absl::Status ValidateRmiaConfig(const RmiaConfig& cfg) {
  if (!(cfg.gamma > 0.0)) {
    return absl::InvalidArgumentError("RMIA gamma must be > 0");
  }
  if (!(cfg.alpha >= 0.0 && cfg.alpha <= 1.0)) {
    return absl::InvalidArgumentError("RMIA alpha must be in [0, 1]");
  }
  return absl::OkStatus();
}

absl::Status ValidateRmiaSignal(SignalId signal) {
  if (signal == SignalId::kRsmape) {
    return absl::InvalidArgumentError(
        "RMIA needs a signal bounded below; rsmape is unbounded");
  }
  return absl::OkStatus();
}

double RmiaMarginal(absl::Span<const double> shadow_g, AttackMode mode,
                    double alpha) {
  double mean = 0.0;
  for (double g : shadow_g) mean += g;
  mean /= static_cast<double>(shadow_g.size());
  if (mode == AttackMode::kOnline) return mean;
  return 0.5 * ((1.0 + alpha) * mean + (1.0 - alpha));
}

double RmiaFraction(double ratio_x, absl::Span<const double> population_ratios,
                    double gamma) {
  int hits = 0;
  for (double ratio_z : population_ratios) {
    if (ratio_x / ratio_z >= gamma) ++hits;
  }
  return static_cast<double>(hits) /
         static_cast<double>(population_ratios.size());
}

absl::StatusOr<std::vector<double>> RmiaScores(
    const SignalTensor& tensor, AttackMode mode, SignalId signal,
    absl::Span<const int> audit_rows, absl::Span<const int> population_rows,
    const RmiaConfig& cfg) {
  if (absl::Status s = ValidateRmiaConfig(cfg); !s.ok()) return s;
  if (absl::Status s = ValidateRmiaSignal(signal); !s.ok()) return s;
  if (population_rows.empty()) {
    return absl::InvalidArgumentError("empty RMIA population sample");
  }
  std::optional<int> k = tensor.column(signal);
  if (!k) {
    return absl::InvalidArgumentError(absl::StrCat(
        "signal ", SignalName(signal), " is not in the signal tensor"));
  }
  const int shadows = tensor.num_models - 1;
  std::vector<double> g(shadows);
  auto ratio = [&](int r) -> absl::StatusOr<double> {
    if (r < 0 || r >= tensor.num_records) {
      return absl::OutOfRangeError(absl::StrCat("record index ", r));
    }
    for (int i = 0; i <= shadows; ++i) {
      if (!(tensor.at(r, i, *k) >= 0.0)) {
        return absl::InvalidArgumentError(absl::StrCat(
            "negative ", SignalName(signal), " at record ",
            tensor.record_ids[r], ", model ", i));
      }
    }
    for (int i = 0; i < shadows; ++i) g[i] = RmiaG(tensor.at(r, i, *k));
    const double p_theta = RmiaG(tensor.at(r, tensor.target_index(), *k));
    return p_theta / RmiaMarginal(g, mode, cfg.alpha);
  };
  std::vector<double> population;
  population.reserve(population_rows.size());
  for (int r : population_rows) {
    absl::StatusOr<double> v = ratio(r);
    if (!v.ok()) return v.status();
    population.push_back(*v);
  }
  std::vector<double> out;
  out.reserve(audit_rows.size());
  for (int r : audit_rows) {
    absl::StatusOr<double> v = ratio(r);
    if (!v.ok()) return v.status();
    out.push_back(RmiaFraction(*v, population, cfg.gamma));
  }
  return out;
}

}  // namespace tsmia
