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

#include "tsmia/scores.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "absl/strings/str_cat.h"

namespace tsmia {

absl::StatusOr<std::vector<double>> AggregateUserScores(
    absl::Span<const std::string> users,
    absl::Span<const std::string> record_users,
    absl::Span<const double> record_scores, bool log_domain, double floor) {
  if (record_users.size() != record_scores.size()) {
    return absl::InvalidArgumentError("record users and scores differ in size");
  }
  if (!log_domain && !(floor > 0.0)) {
    return absl::InvalidArgumentError("score floor must be > 0");
  }
  std::map<std::string, std::pair<double, int>> sums;
  for (const std::string& u : users) sums[u] = {0.0, 0};
  for (size_t i = 0; i < record_users.size(); ++i) {
    auto it = sums.find(record_users[i]);
    if (it == sums.end()) continue;
    const double s = record_scores[i];
    if (std::isnan(s) || (!log_domain && s < 0.0)) {
      return absl::InvalidArgumentError(
          absl::StrCat("invalid record score ", s, " for user '",
                       record_users[i], "'"));
    }
    it->second.first += log_domain ? s : std::log(std::max(s, floor));
    it->second.second += 1;
  }
  std::vector<double> out;
  out.reserve(users.size());
  for (const std::string& u : users) {
    const auto& [sum, count] = sums[u];
    if (count == 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("user '", u, "' has no scored records"));
    }
    out.push_back(sum);
  }
  return out;
}

}  // namespace tsmia
