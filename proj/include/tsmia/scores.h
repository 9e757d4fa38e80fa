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

#ifndef TSMIA_SCORES_H_
#define TSMIA_SCORES_H_

#include <limits>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/types/span.h"
#include "tsmia/shadow.h"

namespace tsmia {

// Scores of one attack on one audit set; larger means more member-like.
// log_domain marks scores that are logarithms of probabilities or ratios.
struct AttackScoreSet {
  std::string attack_id;
  AttackMode mode = AttackMode::kOnline;
  bool log_domain = false;
  std::vector<std::string> ids;  // record or user ids
  std::vector<double> scores;
  std::vector<int> labels;  // 1 = member
};

inline constexpr double kScoreFloor = std::numeric_limits<double>::min();

// User score = sum of log(record score) over the user's records, i.e. the log
// of the product of record scores. Scores already in the log domain are
// summed directly; others are clamped below at `floor` first. Returns one
// score per entry of `users`.
absl::StatusOr<std::vector<double>> AggregateUserScores(
    absl::Span<const std::string> users,
    absl::Span<const std::string> record_users,
    absl::Span<const double> record_scores, bool log_domain,
    double floor = kScoreFloor);

}  // namespace tsmia

#endif  // TSMIA_SCORES_H_
