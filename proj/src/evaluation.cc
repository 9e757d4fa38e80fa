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

#include "tsmia/evaluation.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "absl/strings/match.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "json.hpp"
#include "tsmia/csv_io.h"
#include "tsmia/seeds.h"
#include "tsmia/status_macros.h"

namespace tsmia {
namespace {

using Json = nlohmann::ordered_json;

constexpr char kReportSchema[] = "tsmia-report/1";

absl::StatusOr<std::vector<RecordRef>> PoolRecords(
    const RecordsByUser& records, const std::vector<std::string>& users) {
  std::vector<RecordRef> pool;
  for (const std::string& u : users) {
    auto it = records.find(u);
    if (it == records.end()) {
      return absl::NotFoundError(absl::StrCat("no records for user ", u));
    }
    for (size_t i = 0; i < it->second.size(); ++i) {
      pool.push_back({u, static_cast<int>(i)});
    }
  }
  return pool;
}

// First `count` elements of a seeded shuffle, in their drawn order.
template <typename T>
std::vector<T> Draw(std::vector<T> pool, size_t count, Rng& rng) {
  std::shuffle(pool.begin(), pool.end(), rng);
  pool.resize(count);
  return pool;
}

absl::StatusOr<int> AuditRow(const AuditIndex& index, const std::string& user,
                             int i, const AttackOutput& output) {
  auto it = index.find({user, i});
  if (it == index.end() || it->second < 0 ||
      it->second >= static_cast<int>(output.scores.size())) {
    return absl::NotFoundError(absl::StrCat(
        output.attack_id, ": record ", i, " of user ", user, " not audited"));
  }
  return it->second;
}

struct MetricKey {
  std::string attack_id;
  AttackMode mode;
  std::string game;
  std::string metric;
  bool operator<(const MetricKey& o) const {
    return std::tie(attack_id, mode, game, metric) <
           std::tie(o.attack_id, o.mode, o.game, o.metric);
  }
};

std::vector<std::pair<std::string, double>> MetricValues(
    const GameMetrics& m) {
  std::vector<std::pair<std::string, double>> values;
  for (size_t i = 0; i < m.fpr_targets.size(); ++i) {
    values.emplace_back(TprMetricName(m.fpr_targets[i]), m.tprs[i]);
  }
  values.emplace_back("auc", m.auc);
  return values;
}

}  // namespace

absl::StatusOr<RecordGame> SampleRecordGame(
    const RecordsByUser& records, const std::vector<std::string>& train_users,
    const std::vector<std::string>& test_users, int per_class, uint64_t seed) {
  if (per_class < 1) {
    return absl::InvalidArgumentError("record game needs >= 1 sample per class");
  }
  TSMIA_ASSIGN_OR_RETURN(std::vector<RecordRef> members,
                         PoolRecords(records, train_users));
  TSMIA_ASSIGN_OR_RETURN(std::vector<RecordRef> nonmembers,
                         PoolRecords(records, test_users));
  if (static_cast<int>(members.size()) < per_class ||
      static_cast<int>(nonmembers.size()) < per_class) {
    return absl::FailedPreconditionError(absl::StrCat(
        "record game needs ", per_class, " records per class; have ",
        members.size(), " members and ", nonmembers.size(), " non-members"));
  }
  Rng rng = MakeRng(seed, "record-game");
  RecordGame game;
  game.members = Draw(std::move(members), per_class, rng);
  game.nonmembers = Draw(std::move(nonmembers), per_class, rng);
  return game;
}

absl::StatusOr<UserGame> SampleUserGame(
    const RecordsByUser& records, const std::vector<std::string>& train_users,
    const std::vector<std::string>& test_users, int users_per_class,
    int records_per_user, uint64_t seed) {
  if (users_per_class < 0 || records_per_user < 0) {
    return absl::InvalidArgumentError("user game sizes must be >= 0");
  }
  Rng rng = MakeRng(seed, "user-game");
  UserGame game;
  for (int label : {1, 0}) {
    std::vector<std::string> users = label ? train_users : test_users;
    std::sort(users.begin(), users.end());
    if (users_per_class > 0) {
      if (static_cast<int>(users.size()) < users_per_class) {
        return absl::FailedPreconditionError(absl::StrCat(
            "user game needs ", users_per_class, " users per class; have ",
            users.size()));
      }
      users = Draw(std::move(users), users_per_class, rng);
      std::sort(users.begin(), users.end());
    }
    for (const std::string& u : users) {
      auto it = records.find(u);
      if (it == records.end() || it->second.empty()) {
        return absl::FailedPreconditionError(
            absl::StrCat("user ", u, " has no records"));
      }
      const int n = static_cast<int>(it->second.size());
      UserUnit unit{u, label, {}};
      for (int i = 0; i < n; ++i) unit.record_indices.push_back(i);
      if (records_per_user > 0) {
        if (n < records_per_user) {
          return absl::FailedPreconditionError(
              absl::StrCat("user ", u, " has ", n, " records; ",
                           records_per_user, " requested"));
        }
        unit.record_indices =
            Draw(std::move(unit.record_indices), records_per_user, rng);
        std::sort(unit.record_indices.begin(), unit.record_indices.end());
      }
      game.units.push_back(std::move(unit));
    }
  }
  if (game.units.empty()) {
    return absl::FailedPreconditionError("user game has no users");
  }
  return game;
}

absl::StatusOr<AttackScoreSet> RecordGameScores(const RecordGame& game,
                                                const RecordsByUser& records,
                                                const AuditIndex& index,
                                                const AttackOutput& output) {
  AttackScoreSet set;
  set.attack_id = output.attack_id;
  set.mode = output.mode;
  set.log_domain = output.log_domain;
  for (int label : {1, 0}) {
    for (const RecordRef& ref : label ? game.members : game.nonmembers) {
      TSMIA_ASSIGN_OR_RETURN(int row,
                             AuditRow(index, ref.user_id, ref.index, output));
      set.ids.push_back(RecordId(records.at(ref.user_id)[ref.index]));
      set.scores.push_back(output.scores[row]);
      set.labels.push_back(label);
    }
  }
  return set;
}

absl::StatusOr<AttackScoreSet> UserGameScores(const UserGame& game,
                                              const AuditIndex& index,
                                              const AttackOutput& output) {
  AttackScoreSet set;
  set.attack_id = output.attack_id;
  set.mode = output.mode;
  set.log_domain = true;
  std::vector<std::string> record_users;
  std::vector<double> record_scores;
  for (const UserUnit& unit : game.units) {
    for (int i : unit.record_indices) {
      TSMIA_ASSIGN_OR_RETURN(int row, AuditRow(index, unit.user_id, i, output));
      record_users.push_back(unit.user_id);
      record_scores.push_back(output.scores[row]);
    }
    set.ids.push_back(unit.user_id);
    set.labels.push_back(unit.label);
  }
  TSMIA_ASSIGN_OR_RETURN(set.scores,
                         AggregateUserScores(set.ids, record_users,
                                             record_scores, output.log_domain));
  return set;
}

std::vector<double> ReportedFprTargets(const std::string& game) {
  if (game == kUserGame) return {0.0};
  return {1e-3, 1e-4};
}

std::string TprMetricName(double fpr_target) {
  return absl::StrFormat("tpr@%g%%", 100.0 * fpr_target);
}

absl::StatusOr<GameMetrics> ComputeGameMetrics(const std::string& game,
                                               const AttackScoreSet& scores) {
  absl::StatusOr<RocCurve> roc = ComputeRoc(scores.scores, scores.labels);
  if (!roc.ok()) {
    return absl::Status(roc.status().code(),
                        absl::StrCat(scores.attack_id, " (", game,
                                     " game): ", roc.status().message()));
  }
  GameMetrics m;
  m.attack_id = scores.attack_id;
  m.mode = scores.mode;
  m.game = game;
  m.positives = roc->positives;
  m.negatives = roc->negatives;
  m.auc = Auc(*roc);
  m.fpr_targets = ReportedFprTargets(game);
  for (double t : m.fpr_targets) m.tprs.push_back(TprAtFpr(*roc, t));
  return m;
}

std::string FormatRunReportJson(const RunReport& report) {
  Json doc;
  doc["schema"] = kReportSchema;
  doc["seed"] = report.seed;
  doc["config_digest"] = report.config_digest;
  Json metrics = Json::array();
  for (const GameMetrics& m : report.metrics) {
    Json entry;
    entry["attack_id"] = m.attack_id;
    entry["mode"] = std::string(AttackModeName(m.mode));
    entry["game"] = m.game;
    entry["positives"] = m.positives;
    entry["negatives"] = m.negatives;
    entry["auc"] = m.auc;
    Json tpr = Json::array();
    for (size_t i = 0; i < m.fpr_targets.size(); ++i) {
      tpr.push_back({{"fpr", m.fpr_targets[i]}, {"tpr", m.tprs[i]}});
    }
    entry["tpr_at_fpr"] = std::move(tpr);
    metrics.push_back(std::move(entry));
  }
  doc["metrics"] = std::move(metrics);
  return doc.dump(2) + "\n";
}

absl::StatusOr<RunReport> ParseRunReportJson(const std::string& text) {
  Json doc = Json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    return absl::InvalidArgumentError("report is not valid JSON");
  }
  if (doc.value("schema", "") != kReportSchema) {
    return absl::InvalidArgumentError(
        absl::StrCat("unsupported report schema; expected ", kReportSchema));
  }
  RunReport report;
  try {
    report.seed = doc.at("seed").get<uint64_t>();
    report.config_digest = doc.at("config_digest").get<std::string>();
    for (const Json& entry : doc.at("metrics")) {
      GameMetrics m;
      m.attack_id = entry.at("attack_id").get<std::string>();
      std::optional<AttackMode> mode =
          ParseAttackMode(entry.at("mode").get<std::string>());
      if (!mode) return absl::InvalidArgumentError("unknown attack mode");
      m.mode = *mode;
      m.game = entry.at("game").get<std::string>();
      m.positives = entry.at("positives").get<int>();
      m.negatives = entry.at("negatives").get<int>();
      m.auc = entry.at("auc").get<double>();
      for (const Json& point : entry.at("tpr_at_fpr")) {
        m.fpr_targets.push_back(point.at("fpr").get<double>());
        m.tprs.push_back(point.at("tpr").get<double>());
      }
      report.metrics.push_back(std::move(m));
    }
  } catch (const Json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed report: ", e.what()));
  }
  return report;
}

std::string FormatScoresCsv(absl::Span<const GameScoreSet> sets) {
  std::string out = "game,attack_id,mode,unit_id,label,score\n";
  for (const GameScoreSet& s : sets) {
    for (size_t i = 0; i < s.scores.ids.size(); ++i) {
      absl::StrAppend(&out, s.game, ",", s.scores.attack_id, ",",
                      AttackModeName(s.scores.mode), ",", s.scores.ids[i],
                      ",", s.scores.labels[i], ",",
                      FormatDouble(s.scores.scores[i]), "\n");
    }
  }
  return out;
}

absl::StatusOr<std::vector<GameScoreSet>> ParseScoresCsv(
    const std::string& text) {
  std::vector<absl::string_view> lines =
      absl::StrSplit(text, '\n', absl::SkipEmpty());
  if (lines.empty() || lines[0] != "game,attack_id,mode,unit_id,label,score") {
    return absl::InvalidArgumentError("scores file has an unexpected header");
  }
  std::vector<GameScoreSet> sets;
  for (size_t n = 1; n < lines.size(); ++n) {
    std::vector<absl::string_view> f = absl::StrSplit(lines[n], ',');
    int label = 0;
    double score = 0.0;
    std::optional<AttackMode> mode =
        f.size() == 6 ? ParseAttackMode(f[2]) : std::nullopt;
    if (!mode || !absl::SimpleAtoi(f[4], &label) || (label != 0 && label != 1) ||
        !absl::SimpleAtod(f[5], &score)) {
      return absl::InvalidArgumentError(
          absl::StrCat("malformed scores line ", n + 1));
    }
    if (sets.empty() || sets.back().game != f[0] ||
        sets.back().scores.attack_id != f[1] || sets.back().scores.mode != *mode) {
      GameScoreSet s;
      s.game = std::string(f[0]);
      s.scores.attack_id = std::string(f[1]);
      s.scores.mode = *mode;
      s.scores.log_domain = s.game == kUserGame;
      sets.push_back(std::move(s));
    }
    AttackScoreSet& s = sets.back().scores;
    s.ids.emplace_back(f[3]);
    s.labels.push_back(label);
    s.scores.push_back(score);
  }
  return sets;
}

std::string FormatRocCsv(const RocCurve& roc) {
  std::string out = "threshold,fpr,tpr\n";
  for (const RocPoint& p : roc.points) {
    absl::StrAppend(&out, FormatDouble(p.threshold), ",", FormatDouble(p.fpr),
                    ",", FormatDouble(p.tpr), "\n");
  }
  return out;
}

absl::StatusOr<std::vector<MetricSummary>> AggregateRuns(
    absl::Span<const RunReport> reports) {
  if (reports.empty()) {
    return absl::InvalidArgumentError("no reports to aggregate");
  }
  std::vector<MetricKey> order;
  std::map<MetricKey, std::vector<double>> values;
  for (size_t r = 0; r < reports.size(); ++r) {
    if (reports[r].config_digest != reports[0].config_digest) {
      return absl::FailedPreconditionError(absl::StrCat(
          "config mismatch: seed ", reports[r].seed, " has digest ",
          reports[r].config_digest, ", expected ",
          reports[0].config_digest));
    }
    std::set<MetricKey> seen;
    for (const GameMetrics& m : reports[r].metrics) {
      for (const auto& [name, value] : MetricValues(m)) {
        MetricKey key{m.attack_id, m.mode, m.game, name};
        if (!seen.insert(key).second) {
          return absl::InvalidArgumentError(
              absl::StrCat("duplicate metric ", m.attack_id, "/", name));
        }
        if (r == 0) order.push_back(key);
        values[key].push_back(value);
      }
    }
    if (seen.size() != order.size() ||
        values.size() != order.size()) {
      return absl::FailedPreconditionError(absl::StrCat(
          "report for seed ", reports[r].seed,
          " has a different set of attacks or metrics"));
    }
  }
  std::vector<MetricSummary> out;
  for (const MetricKey& key : order) {
    const std::vector<double>& v = values[key];
    MetricSummary s{key.attack_id, key.mode, key.game, key.metric,
                    static_cast<int>(v.size())};
    for (double x : v) s.mean += x;
    s.mean /= static_cast<double>(v.size());
    if (v.size() > 1) {
      double ss = 0.0;
      for (double x : v) ss += (x - s.mean) * (x - s.mean);
      s.stddev = std::sqrt(ss / static_cast<double>(v.size() - 1));
    }
    out.push_back(std::move(s));
  }
  return out;
}

namespace {

// The ensemble baseline fixes its classifier family itself, so tables flag
// it as a simplified variant.
std::string AttackDisplayName(const std::string& attack_id) {
  constexpr absl::string_view kEnsemble = "ensemble-";
  if (absl::StartsWith(attack_id, kEnsemble)) {
    return absl::StrCat("Ensemble (simplified) ",
                        attack_id.substr(kEnsemble.size()));
  }
  return attack_id;
}

}  // namespace

std::string FormatSummaryTable(absl::Span<const MetricSummary> summaries) {
  struct Row {
    std::string attack;
    std::string mode;
    std::map<std::string, const MetricSummary*> cells;
  };
  std::vector<Row> rows;
  int runs = 0;
  for (const MetricSummary& s : summaries) {
    runs = std::max(runs, s.runs);
    const std::string mode(AttackModeName(s.mode));
    auto it = std::find_if(rows.begin(), rows.end(), [&](const Row& r) {
      return r.attack == AttackDisplayName(s.attack_id) && r.mode == mode;
    });
    if (it == rows.end()) {
      rows.push_back({AttackDisplayName(s.attack_id), mode, {}});
      it = rows.end() - 1;
    }
    it->cells[s.game + "/" + s.metric] = &s;
  }
  const std::pair<const char*, const char*> columns[] = {
      {"record/tpr@0.1%", "TPR@0.1%"},
      {"record/tpr@0.01%", "TPR@0.01%"},
      {"user/tpr@0%", "user TPR@0%"},
      {"record/auc", "AUC"}};
  size_t width = 6;
  for (const Row& r : rows) width = std::max(width, r.attack.size());
  std::string out = absl::StrFormat("%-*s  %-7s", width, "attack", "mode");
  for (const auto& c : columns) absl::StrAppend(&out, absl::StrFormat("  %18s", c.second));
  absl::StrAppend(&out, "\n");
  for (const Row& r : rows) {
    absl::StrAppend(&out, absl::StrFormat("%-*s  %-7s", width, r.attack, r.mode));
    for (const auto& c : columns) {
      auto it = r.cells.find(c.first);
      std::string cell = "-";
      if (it != r.cells.end()) {
        // TPRs in percent, AUC as a fraction.
        const double scale = it->second->metric == "auc" ? 1.0 : 100.0;
        cell = absl::StrFormat("%.3f ± %.3f", scale * it->second->mean,
                               scale * it->second->stddev);
      }
      // The ± sign is two bytes wide in UTF-8.
      absl::StrAppend(&out, absl::StrFormat("  %*s", cell == "-" ? 18 : 19, cell));
    }
    absl::StrAppend(&out, "\n");
  }
  absl::StrAppend(&out, absl::StrFormat("runs: %d\n", runs));
  return out;
}

std::string FormatSummaryCsv(absl::Span<const MetricSummary> summaries) {
  std::string out = "attack_id,mode,game,metric,runs,mean,std\n";
  for (const MetricSummary& s : summaries) {
    absl::StrAppend(&out, s.attack_id, ",", AttackModeName(s.mode), ",",
                    s.game, ",", s.metric, ",", s.runs, ",",
                    FormatDouble(s.mean), ",", FormatDouble(s.stddev), "\n");
  }
  return out;
}

}  // namespace tsmia
