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

#ifndef TSMIA_RMIA_H_
#define TSMIA_RMIA_H_

#include <vector>

#include "absl/status/statusor.h"
#include "absl/types/span.h"
#include "tsmia/shadow.h"
#include "tsmia/signals.h"

namespace tsmia {

struct RmiaConfig {
  double gamma = 1.0;
  double alpha = 1.0 / 3.0;  // offline interpolation
};

absl::Status ValidateRmiaConfig(const RmiaConfig& cfg);
absl::Status ValidateRmiaSignal(SignalId signal);

// Decreasing map from a non-negative signal to a pseudo-probability.
inline double RmiaG(double s) { return 1.0 / (1.0 + s); }

// Marginal p(x) from the g-values of x under the shadow models. Online: their
// mean. Offline (all shadows out): ((1 + alpha) * mean + (1 - alpha)) / 2.
double RmiaMarginal(absl::Span<const double> shadow_g, AttackMode mode,
                    double alpha);

// Fraction of population entries z with ratio_x / ratio_z >= gamma, where
// ratio = p_theta / p(x). Ties count as hits.
double RmiaFraction(double ratio_x, absl::Span<const double> population_ratios,
                    double gamma);

// Scores audit rows of `tensor` against population rows. Rows are tensor
// record indices.
absl::StatusOr<std::vector<double>> RmiaScores(
    const SignalTensor& tensor, AttackMode mode, SignalId signal,
    absl::Span<const int> audit_rows, absl::Span<const int> population_rows,
    const RmiaConfig& cfg);

}  // namespace tsmia

#endif  // TSMIA_RMIA_H_
