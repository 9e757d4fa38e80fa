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

#ifndef TSMIA_LIRA_H_
#define TSMIA_LIRA_H_

#include <vector>

#include "absl/status/statusor.h"
#include "absl/types/span.h"
#include "tsmia/series.h"
#include "tsmia/shadow.h"
#include "tsmia/signals.h"

namespace tsmia {

enum class VarianceMode {
  kPerExample,  // each record's own spread across shadows
  kGlobal,      // per signal, pooled within-record variance over all records
};

struct GaussianFitOptions {
  VarianceMode variance_mode = VarianceMode::kPerExample;
  double sigma_floor = 1e-6;
};

// Per-record, per-signal Gaussian fits of shadow signals, in raw signal
// units. Rows follow the tensor's records, columns its signals. Variances use
// the population convention (divide by n). The in-side is absent offline.
struct GaussianSignalModel {
  std::vector<SignalId> signals;
  VarianceMode variance_mode = VarianceMode::kPerExample;
  bool has_in = false;
  Matrix mu_in, sigma_in;
  Matrix mu_out, sigma_out;
};

// Online fits both groups and requires every record to have at least one in
// and one out shadow. Offline fits only the out group.
absl::StatusOr<GaussianSignalModel> FitGaussianModel(
    const SignalTensor& tensor, const MembershipMatrix& membership,
    AttackMode mode, const GaussianFitOptions& options = {});

double LogNormalPdf(double x, double mu, double sigma);
// log Phi(z), accurate far into the lower tail.
double LogStandardNormalCdf(double z);

// sum_k log N(s_k; mu_in, sigma_in) - log N(s_k; mu_out, sigma_out) over
// `columns`; `signals` is indexed by model column.
double LiraOnlineLogScore(const GaussianSignalModel& model, int record,
                          absl::Span<const double> signals,
                          absl::Span<const int> columns);

// sum_k log Pr(Z_k <= s_k), Z_k ~ N(mu_out, sigma_out). With `orient`, every
// signal is negated first (s -> -s, mu -> -mu) since all signals are
// lower-is-member; the term becomes log Phi((mu_out - s) / sigma_out).
double LiraOfflineLogScore(const GaussianSignalModel& model, int record,
                           absl::Span<const double> signals,
                           absl::Span<const int> columns, bool orient = true);

// Log-domain scores of the target model's signals for `records` (tensor row
// indices), over the subset `use` of the tensor's signals (empty = all).
absl::StatusOr<std::vector<double>> LiraScores(
    const GaussianSignalModel& model, const SignalTensor& tensor,
    AttackMode mode, absl::Span<const int> records,
    absl::Span<const SignalId> use = {}, bool orient = true);

}  // namespace tsmia

#endif  // TSMIA_LIRA_H_
