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

#ifndef TSMIA_EVALUATION_H_
#define TSMIA_EVALUATION_H_

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/types/span.h"
#include "tsmia/roc.h"
#include "tsmia/scores.h"
#include "tsmia/shadow.h"

namespace tsmia {

// A record is addressed by its user and its position in that user's
// windowed record list.
struct RecordRef {
  std::string user_id;
  int index = 0;
  bool operator==(const RecordRef&) const = default;
};

// Balanced record-level audit set: members from train-user records,
// non-members from test-user records.
struct RecordGame {
  std::vector<RecordRef> members;
  std::vector<RecordRef> nonmembers;
};

// `per_class` records drawn uniformly without replacement from each pool,
// using DeriveSeed(seed, "record-game").
absl::StatusOr<RecordGame> SampleRecordGame(
    const RecordsByUser& records, const std::vector<std::string>& train_users,
    const std::vector<std::string>& test_users, int per_class, uint64_t seed);

struct UserUnit {
  std::string user_id;
  int label = 0;  // 1 = member
  std::vector<int> record_indices;
};

// User-level audit set. users_per_class = 0 takes every train and test user;
// records_per_user = 0 takes every record of a user. Sampling uses
// DeriveSeed(seed, "user-game").
struct UserGame {
  std::vector<UserUnit> units;
};

absl::StatusOr<UserGame> SampleUserGame(
    const RecordsByUser& records, const std::vector<std::string>& train_users,
    const std::vector<std::string>& test_users, int users_per_class,
    int records_per_user, uint64_t seed);

// Scores of one attack over the rows of an audit record list.
struct AttackOutput {
  std::string attack_id;
  AttackMode mode = AttackMode::kOnline;
  bool log_domain = false;
  std::vector<double> scores;  // indexed by audit row
};

// Audit row of each audited record, keyed by (user_id, index).
using AuditIndex = std::map<std::pair<std::string, int>, int>;

// Record ids are RecordId strings.
absl::StatusOr<AttackScoreSet> RecordGameScores(const RecordGame& game,
                                                const RecordsByUser& records,
                                                const AuditIndex& index,
                                                const AttackOutput& output);
// Each unit's score aggregates its records' scores; see AggregateUserScores.
absl::StatusOr<AttackScoreSet> UserGameScores(const UserGame& game,
                                              const AuditIndex& index,
                                              const AttackOutput& output);

inline constexpr char kRecordGame[] = "record";
inline constexpr char kUserGame[] = "user";

// FPR targets reported per game.
std::vector<double> ReportedFprTargets(const std::string& game);
std::string TprMetricName(double fpr_target);  // e.g. "tpr@0.1%"

struct GameMetrics {
  std::string attack_id;
  AttackMode mode = AttackMode::kOnline;
  std::string game;
  int positives = 0;
  int negatives = 0;
  double auc = 0.0;
  std::vector<double> fpr_targets;
  std::vector<double> tprs;
};

absl::StatusOr<GameMetrics> ComputeGameMetrics(const std::string& game,
                                               const AttackScoreSet& scores);

struct GameScoreSet {
  std::string game;
  AttackScoreSet scores;
};

// One seed's results. config_digest identifies the configuration with the
// seed list removed.
struct RunReport {
  uint64_t seed = 0;
  std::string config_digest;
  std::vector<GameMetrics> metrics;
  std::vector<GameScoreSet> score_sets;
};

// JSON document (schema "tsmia-report/1") holding seed, digest and metrics.
std::string FormatRunReportJson(const RunReport& report);
absl::StatusOr<RunReport> ParseRunReportJson(const std::string& text);

// "game,attack_id,mode,unit_id,label,score" rows.
std::string FormatScoresCsv(absl::Span<const GameScoreSet> sets);
absl::StatusOr<std::vector<GameScoreSet>> ParseScoresCsv(
    const std::string& text);

// "threshold,fpr,tpr" rows.
std::string FormatRocCsv(const RocCurve& roc);

struct MetricSummary {
  std::string attack_id;
  AttackMode mode = AttackMode::kOnline;
  std::string game;
  std::string metric;  // "auc" or a TprMetricName
  int runs = 0;
  double mean = 0.0;
  double stddev = 0.0;  // sample (n - 1); 0 when runs == 1
};

// Summaries in order of first appearance. Reports must share a config digest
// and carry the same (attack, mode, game) entries.
absl::StatusOr<std::vector<MetricSummary>> AggregateRuns(
    absl::Span<const RunReport> reports);

// Table with one row per (attack, mode) and columns TPR@0.1%, TPR@0.01%,
// user TPR@0%, AUC as "mean ± std" percentages.
std::string FormatSummaryTable(absl::Span<const MetricSummary> summaries);
// "attack_id,mode,game,metric,runs,mean,std" rows.
std::string FormatSummaryCsv(absl::Span<const MetricSummary> summaries);

}  // namespace tsmia

#endif  // TSMIA_EVALUATION_H_
