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

#include "tsmia/pipeline.h"

#include <algorithm>
#include <filesystem>
#include <map>
#include <set>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "tsmia/csv_io.h"
#include "tsmia/dts.h"
#include "tsmia/ensemble_attack.h"
#include "tsmia/lira.h"
#include "tsmia/model_io.h"
#include "tsmia/rmia.h"
#include "tsmia/seeds.h"
#include "tsmia/shadow.h"
#include "tsmia/status_macros.h"
#include "tsmia/synthetic.h"

namespace tsmia {
namespace {

namespace fs = std::filesystem;

absl::Status InStage(absl::string_view stage, const absl::Status& s) {
  if (s.ok()) return s;
  return absl::Status(s.code(), absl::StrCat("stage ", stage, ": ", s.message()));
}

template <typename T>
absl::StatusOr<T> InStage(absl::string_view stage, absl::StatusOr<T> v) {
  if (v.ok()) return v;
  return InStage(stage, v.status());
}

uint64_t ModeIndex(AttackMode mode) { return mode == AttackMode::kOnline ? 0 : 1; }

struct Prepared {
  PopulationSplit split;
  RecordsByUser records;  // scaled windows of every assigned user
};

std::vector<ForecastRecord> Gather(const RecordsByUser& records,
                                   const std::vector<std::string>& users) {
  std::vector<ForecastRecord> out;
  for (const std::string& u : users) {
    const std::vector<ForecastRecord>& list = records.at(u);
    out.insert(out.end(), list.begin(), list.end());
  }
  return out;
}

std::vector<std::string> Concat(std::vector<std::string> a,
                                const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

absl::StatusOr<Prepared> Prepare(const ExperimentConfig& cfg,
                                 const std::vector<UserSeries>& population,
                                 uint64_t seed) {
  Prepared p;
  std::vector<std::string> ids;
  std::map<std::string, const UserSeries*> by_id;
  for (const UserSeries& s : population) {
    ids.push_back(s.user_id);
    by_id[s.user_id] = &s;
  }
  TSMIA_ASSIGN_OR_RETURN(p.split,
                         InStage("split", SplitUsers(ids, cfg.split, seed)));

  std::vector<UserSeries> train;
  for (const std::string& u : p.split.train_users) train.push_back(*by_id[u]);
  TSMIA_ASSIGN_OR_RETURN(ScalerParams scaler, InStage("scale", FitScaler(train)));

  for (const auto* group : {&p.split.train_users, &p.split.val_users,
                            &p.split.test_users, &p.split.aux_users}) {
    for (const std::string& u : *group) {
      TSMIA_ASSIGN_OR_RETURN(UserSeries scaled,
                             InStage("scale", ApplyScaler(*by_id[u], scaler)));
      TSMIA_ASSIGN_OR_RETURN(
          std::vector<ForecastRecord> windows,
          InStage("window", WindowSeries(scaled, cfg.lookback, cfg.horizon,
                                         cfg.stride)));
      if (windows.empty()) {
        return absl::FailedPreconditionError(absl::StrCat(
            "stage window: user ", u, " is shorter than lookback + horizon"));
      }
      p.records[u] = std::move(windows);
    }
  }
  return p;
}

std::string SeedCacheDir(const PipelineOptions& options, uint64_t seed) {
  return (fs::path(options.cache_dir) / absl::StrCat("seed-", seed)).string();
}

absl::StatusOr<TrainedForecaster> TargetModel(const ExperimentConfig& cfg,
                                              const Prepared& p, uint64_t seed,
                                              const PipelineOptions& options) {
  std::string path;
  if (!options.cache_dir.empty()) {
    path = (fs::path(SeedCacheDir(options, seed)) /
            absl::StrCat("target-", TargetStageDigest(cfg), ".model"))
               .string();
    if (fs::exists(path)) {
      absl::StatusOr<TrainedForecaster> cached = LoadForecaster(path);
      if (cached.ok()) return cached;
    }
  }
  ForecasterConfig fc = cfg.forecaster;
  fc.seed = DeriveSeed(seed, "target");
  TSMIA_ASSIGN_OR_RETURN(
      TrainedForecaster model,
      InStage("target", FitForecaster(fc, Gather(p.records, p.split.train_users),
                                      Gather(p.records, p.split.val_users))));
  if (!path.empty()) {
    fs::create_directories(fs::path(path).parent_path());
    TSMIA_RETURN_IF_ERROR(InStage("target", SaveForecaster(path, model)));
  }
  return model;
}

absl::StatusOr<ShadowEnsemble> Shadows(const ExperimentConfig& cfg,
                                       const Prepared& p, uint64_t seed,
                                       AttackMode mode,
                                       const PipelineOptions& options) {
  const std::string stage = absl::StrCat("shadows (", AttackModeName(mode), ")");
  const std::string digest = ShadowStageDigest(cfg, mode);
  std::string dir;
  if (!options.cache_dir.empty()) {
    dir = (fs::path(SeedCacheDir(options, seed)) /
           absl::StrCat("shadows-", AttackModeName(mode), "-", digest))
              .string();
    absl::StatusOr<ShadowEnsemble> cached = LoadShadowEnsemble(dir, digest);
    if (cached.ok()) return cached;
  }
  ShadowPlanOptions po;
  po.offline_fraction = cfg.offline_fraction;
  const bool early = cfg.forecaster.kind == ForecasterKind::kMlp &&
                     cfg.forecaster.early_stopping;
  po.validation_fraction = early ? cfg.shadow_validation_fraction : 0.0;
  TSMIA_ASSIGN_OR_RETURN(
      ShadowPlan plan,
      InStage(stage, PlanShadows(p.split, mode, cfg.shadow_models,
                                 DeriveSeed(seed, "shadow-plan", ModeIndex(mode)),
                                 po)));
  TSMIA_ASSIGN_OR_RETURN(
      ShadowEnsemble ensemble,
      InStage(stage, TrainShadowEnsemble(plan, p.records, cfg.forecaster,
                                         options.jobs)));
  if (!dir.empty()) {
    TSMIA_RETURN_IF_ERROR(
        InStage(stage, SaveShadowEnsemble(dir, ensemble, digest)));
  }
  return ensemble;
}

// Shadow predictions (then the target's) on `rows`, reused from the cache
// when the shadow digest and the row list match.
absl::StatusOr<std::vector<Matrix>> Predictions(
    const ExperimentConfig& cfg, const ShadowEnsemble& ensemble,
    const TrainedForecaster& target, const std::vector<ForecastRecord>& rows,
    uint64_t seed, AttackMode mode, const PipelineOptions& options) {
  std::string path;
  if (!options.cache_dir.empty()) {
    std::string key = ShadowStageDigest(cfg, mode);
    for (const ForecastRecord& r : rows) absl::StrAppend(&key, "|", RecordId(r));
    path = (fs::path(SeedCacheDir(options, seed)) /
            absl::StrFormat("predictions-%s-%016x.txt", AttackModeName(mode),
                            Fnv1a64(key)))
               .string();
    if (fs::exists(path)) {
      absl::StatusOr<std::string> text = ReadFileToString(path);
      if (text.ok()) {
        absl::StatusOr<std::vector<Matrix>> cached = ParsePredictions(*text);
        if (cached.ok() &&
            static_cast<int>(cached->size()) == ensemble.plan.num_models() + 1 &&
            std::all_of(cached->begin(), cached->end(), [&](const Matrix& m) {
              return m.rows() == target.shape.output_size() &&
                     m.cols() == static_cast<Eigen::Index>(rows.size());
            })) {
          return cached;
        }
      }
    }
  }
  std::vector<Matrix> predictions;
  for (const TrainedForecaster& m : ensemble.models) {
    predictions.push_back(PredictRecords(m, rows));
  }
  predictions.push_back(PredictRecords(target, rows));
  if (!path.empty()) {
    TSMIA_RETURN_IF_ERROR(WriteStringToFile(path, FormatPredictions(predictions)));
  }
  return predictions;
}

// Rows [0, n) of a tensor.
SignalTensor HeadRows(const SignalTensor& t, int n) {
  SignalTensor out = t;
  out.num_records = n;
  out.record_ids.resize(n);
  out.values.resize(static_cast<size_t>(n) * t.num_models * t.signals.size());
  return out;
}

MembershipMatrix HeadRows(const MembershipMatrix& m, int n) {
  MembershipMatrix out(n, m.models());
  for (int r = 0; r < n; ++r) {
    for (int i = 0; i < m.models(); ++i) out.set(r, i, m.at(r, i));
  }
  return out;
}

std::vector<int> Iota(int begin, int end) {
  std::vector<int> v;
  for (int i = begin; i < end; ++i) v.push_back(i);
  return v;
}

struct AuditSet {
  RecordGame record_game;
  UserGame user_game;
  AuditIndex index;
  std::vector<ForecastRecord> rows;  // audit rows, then population rows
  int audit_rows = 0;
};

absl::StatusOr<AuditSet> BuildAuditSet(const ExperimentConfig& cfg,
                                       const Prepared& p, uint64_t seed) {
  AuditSet a;
  TSMIA_ASSIGN_OR_RETURN(
      a.record_game,
      InStage("games", SampleRecordGame(p.records, p.split.train_users,
                                        p.split.test_users, cfg.record_samples,
                                        seed)));
  TSMIA_ASSIGN_OR_RETURN(
      a.user_game,
      InStage("games", SampleUserGame(p.records, p.split.train_users,
                                      p.split.test_users, cfg.user_samples,
                                      cfg.records_per_user, seed)));
  std::set<std::pair<std::string, int>> audited;
  for (const RecordRef& r : a.record_game.members) audited.insert({r.user_id, r.index});
  for (const RecordRef& r : a.record_game.nonmembers) {
    audited.insert({r.user_id, r.index});
  }
  for (const UserUnit& u : a.user_game.units) {
    for (int i : u.record_indices) audited.insert({u.user_id, i});
  }
  for (const auto& key : audited) {
    a.index[key] = static_cast<int>(a.rows.size());
    a.rows.push_back(p.records.at(key.first)[key.second]);
  }
  a.audit_rows = static_cast<int>(a.rows.size());

  if (cfg.HasAttack("rmia")) {
    std::vector<std::pair<std::string, int>> pool;
    for (const std::string& u : p.split.aux_users) {
      for (size_t i = 0; i < p.records.at(u).size(); ++i) {
        pool.emplace_back(u, static_cast<int>(i));
      }
    }
    if (static_cast<int>(pool.size()) < cfg.rmia_population) {
      return absl::FailedPreconditionError(absl::StrCat(
          "stage games: rmia population of ", cfg.rmia_population,
          " exceeds the ", pool.size(), " aux records"));
    }
    Rng rng = MakeRng(seed, "rmia-population");
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(cfg.rmia_population);
    std::sort(pool.begin(), pool.end());
    for (const auto& [u, i] : pool) a.rows.push_back(p.records.at(u)[i]);
  }
  return a;
}

struct ModeArtifacts {
  AttackMode mode;
  ShadowEnsemble ensemble;
  SignalTensor tensor;
  MembershipMatrix membership;
  Matrix target_predictions;  // on the tensor rows
};

std::vector<std::string> SourceUsers(const PopulationSplit& split,
                                     AttackMode mode) {
  return mode == AttackMode::kOnline
             ? Concat(split.train_users, split.test_users)
             : split.aux_users;
}

// Ensemble classifiers learn from shadow signals labeled by shadow
// membership and score the target's signals on the audit rows.
absl::StatusOr<std::vector<AttackOutput>> EnsembleOutputs(
    const ExperimentConfig& cfg, const Prepared& p, const AuditSet& audit,
    const ModeArtifacts& m, const SignalOptions& signal_options,
    uint64_t seed, int jobs) {
  const int member_share = cfg.ensemble.subset_size / 2;
  const int nonmember_share = cfg.ensemble.subset_size - member_share;
  const size_t want[2] = {
      static_cast<size_t>(cfg.ensemble.executions) * cfg.ensemble.combinations *
          nonmember_share,
      static_cast<size_t>(cfg.ensemble.executions) * cfg.ensemble.combinations *
          member_share};
  Rng rng = MakeRng(seed, "ensemble-labeled", ModeIndex(m.mode));
  std::vector<ForecastRecord> source =
      Gather(p.records, SourceUsers(p.split, m.mode));
  std::shuffle(source.begin(), source.end(), rng);
  source.resize(std::min(source.size(), std::max(want[0], want[1])));

  std::vector<Matrix> predictions;
  for (const TrainedForecaster& model : m.ensemble.models) {
    predictions.push_back(PredictRecords(model, source));
  }
  TSMIA_ASSIGN_OR_RETURN(SignalTensor shadow_signals,
                         ComputeSignalTensor(predictions, source, cfg.signals,
                                             signal_options, jobs));
  const MembershipMatrix membership =
      BuildMembership(m.ensemble.plan, source);
  std::vector<std::pair<int, int>> pairs[2];  // (record, shadow) by label
  for (int r = 0; r < shadow_signals.num_records; ++r) {
    for (int i = 0; i < shadow_signals.num_models; ++i) {
      pairs[membership.at(r, i) ? 1 : 0].emplace_back(r, i);
    }
  }
  const int signals = static_cast<int>(cfg.signals.size());
  Matrix labeled[2];
  for (int label : {0, 1}) {
    std::shuffle(pairs[label].begin(), pairs[label].end(), rng);
    pairs[label].resize(std::min(pairs[label].size(), want[label]));
    labeled[label].resize(static_cast<Eigen::Index>(pairs[label].size()),
                          signals);
    for (size_t j = 0; j < pairs[label].size(); ++j) {
      for (int k = 0; k < signals; ++k) {
        labeled[label](j, k) =
            shadow_signals.at(pairs[label][j].first, pairs[label][j].second, k);
      }
    }
  }
  const int target = m.tensor.num_models - 1;
  Matrix audit_features(audit.audit_rows, signals);
  for (int r = 0; r < audit.audit_rows; ++r) {
    for (int k = 0; k < signals; ++k) audit_features(r, k) = m.tensor.at(r, target, k);
  }
  std::vector<AttackOutput> outputs;
  for (int k = 0; k < signals; ++k) {
    AttackOutput out{absl::StrCat("ensemble-", SignalName(cfg.signals[k])),
                     m.mode, false, {}};
    TSMIA_ASSIGN_OR_RETURN(
        out.scores,
        EnsembleAttackScores(labeled[1].col(k), labeled[0].col(k),
                             audit_features.col(k), cfg.ensemble,
                             DeriveSeed(seed, "ensemble",
                                        ModeIndex(m.mode) * signals + k)));
    outputs.push_back(std::move(out));
  }
  return outputs;
}

absl::StatusOr<std::vector<AttackOutput>> ShadowAttackOutputs(
    const ExperimentConfig& cfg, const std::string& attack, const Prepared& p,
    const AuditSet& audit, const ModeArtifacts& m,
    const SignalOptions& signal_options, uint64_t seed, int jobs) {
  std::vector<AttackOutput> outputs;
  const std::vector<int> audit_rows = Iota(0, audit.audit_rows);
  if (attack == "lira") {
    GaussianFitOptions fit;
    fit.variance_mode = cfg.lira_variance;
    fit.sigma_floor = cfg.lira_sigma_floor;
    // Online fits need in-models, which population rows never have.
    const SignalTensor tensor = HeadRows(m.tensor, audit.audit_rows);
    TSMIA_ASSIGN_OR_RETURN(
        GaussianSignalModel model,
        FitGaussianModel(tensor, HeadRows(m.membership, audit.audit_rows),
                         m.mode, fit));
    std::vector<std::pair<std::string, std::vector<SignalId>>> variants = {
        {"lira-multi", cfg.signals}};
    if (cfg.lira_single_signal && cfg.signals.size() > 1) {
      for (SignalId id : cfg.signals) {
        variants.push_back({absl::StrCat("lira-", SignalName(id)), {id}});
      }
    }
    for (const auto& [id, use] : variants) {
      AttackOutput out{id, m.mode, true, {}};
      TSMIA_ASSIGN_OR_RETURN(out.scores,
                             LiraScores(model, tensor, m.mode, audit_rows, use));
      outputs.push_back(std::move(out));
    }
  } else if (attack == "rmia") {
    const std::vector<int> population =
        Iota(audit.audit_rows, m.tensor.num_records);
    for (SignalId id : cfg.signals) {
      if (!ValidateRmiaSignal(id).ok()) continue;
      AttackOutput out{absl::StrCat("rmia-", SignalName(id)), m.mode, false, {}};
      TSMIA_ASSIGN_OR_RETURN(out.scores,
                             RmiaScores(m.tensor, m.mode, id, audit_rows,
                                        population, cfg.rmia));
      outputs.push_back(std::move(out));
    }
  } else if (attack == "ensemble") {
    return EnsembleOutputs(cfg, p, audit, m, signal_options, seed, jobs);
  } else if (attack == "dts") {
    const std::vector<std::string> source_users =
        SourceUsers(p.split, m.mode);
    const uint64_t dts_seed = DeriveSeed(seed, "dts", ModeIndex(m.mode));
    TSMIA_ASSIGN_OR_RETURN(
        DtsDataset dataset,
        BuildDtsDataset(m.ensemble, Gather(p.records, source_users),
                        cfg.dts_fraction, dts_seed, jobs));
    TSMIA_ASSIGN_OR_RETURN(DtsClassifier classifier,
                           TrainDts(dataset, cfg.dts, dts_seed));
    const std::vector<ForecastRecord> audit_records(
        audit.rows.begin(), audit.rows.begin() + audit.audit_rows);
    AttackOutput out{"dts", m.mode, false, {}};
    TSMIA_ASSIGN_OR_RETURN(
        out.scores,
        DtsScores(classifier, FlattenTargets(audit_records),
                  m.target_predictions.leftCols(audit.audit_rows)));
    outputs.push_back(std::move(out));
  }
  return outputs;
}

std::string SeedDir(const std::string& out_dir, uint64_t seed) {
  return (fs::path(out_dir) / absl::StrCat("seed-", seed)).string();
}

std::string RocFileName(const GameMetrics& m) {
  return absl::StrCat(m.game, "-", m.attack_id, "-", AttackModeName(m.mode),
                      ".csv");
}

}  // namespace

absl::StatusOr<std::vector<UserSeries>> LoadPopulation(
    const ExperimentConfig& cfg) {
  absl::StatusOr<std::vector<UserSeries>> population =
      cfg.data_source == "csv" ? ReadPopulationCsv(cfg.csv_path)
                               : GeneratePopulation(cfg.synthetic);
  return InStage("data", std::move(population));
}

absl::Status SynthesizePopulation(const ExperimentConfig& cfg,
                                  const std::string& path) {
  TSMIA_ASSIGN_OR_RETURN(std::vector<UserSeries> population,
                         InStage("data", GeneratePopulation(cfg.synthetic)));
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
  return WritePopulationCsv(path, population);
}

absl::StatusOr<SeedRun> RunSeed(const ExperimentConfig& cfg,
                                const std::vector<UserSeries>& population,
                                uint64_t seed, const PipelineOptions& options) {
  TSMIA_RETURN_IF_ERROR(ValidateExperimentConfig(cfg));
  TSMIA_ASSIGN_OR_RETURN(Prepared p, Prepare(cfg, population, seed));
  TSMIA_ASSIGN_OR_RETURN(TrainedForecaster target,
                         TargetModel(cfg, p, seed, options));
  TSMIA_ASSIGN_OR_RETURN(AuditSet audit, BuildAuditSet(cfg, p, seed));
  SignalOptions signal_options;
  signal_options.trend_degree = cfg.trend_degree;

  std::vector<ModeArtifacts> modes;
  for (AttackMode mode : cfg.modes) {
    ModeArtifacts m;
    m.mode = mode;
    TSMIA_ASSIGN_OR_RETURN(m.ensemble, Shadows(cfg, p, seed, mode, options));
    TSMIA_ASSIGN_OR_RETURN(
        std::vector<Matrix> predictions,
        Predictions(cfg, m.ensemble, target, audit.rows, seed, mode, options));
    TSMIA_ASSIGN_OR_RETURN(
        m.tensor,
        InStage("signals", ComputeSignalTensor(predictions, audit.rows,
                                               cfg.signals, signal_options,
                                               options.jobs)));
    m.membership = BuildMembership(m.ensemble.plan, audit.rows);
    m.target_predictions = std::move(predictions.back());
    modes.push_back(std::move(m));
  }

  std::vector<AttackOutput> outputs;
  for (const std::string& attack : cfg.attacks) {
    const std::string stage = absl::StrCat("attack ", attack);
    for (const ModeArtifacts& m : modes) {
      TSMIA_ASSIGN_OR_RETURN(
          std::vector<AttackOutput> out,
          InStage(absl::StrCat(stage, " (", AttackModeName(m.mode), ")"),
                  ShadowAttackOutputs(cfg, attack, p, audit, m,
                                      signal_options, seed, options.jobs)));
      for (AttackOutput& o : out) outputs.push_back(std::move(o));
    }
  }

  SeedRun run;
  run.report.seed = seed;
  run.report.config_digest = ConfigDigest(cfg);
  for (const AttackOutput& out : outputs) {
    TSMIA_ASSIGN_OR_RETURN(
        AttackScoreSet record,
        InStage("evaluation",
                RecordGameScores(audit.record_game, p.records, audit.index, out)));
    TSMIA_ASSIGN_OR_RETURN(
        AttackScoreSet user,
        InStage("evaluation", UserGameScores(audit.user_game, audit.index, out)));
    for (GameScoreSet set : {GameScoreSet{kRecordGame, std::move(record)},
                             GameScoreSet{kUserGame, std::move(user)}}) {
      TSMIA_ASSIGN_OR_RETURN(
          GameMetrics metrics,
          InStage("evaluation", ComputeGameMetrics(set.game, set.scores)));
      TSMIA_ASSIGN_OR_RETURN(
          RocCurve roc, ComputeRoc(set.scores.scores, set.scores.labels));
      run.report.metrics.push_back(std::move(metrics));
      run.rocs.push_back(std::move(roc));
      run.report.score_sets.push_back(std::move(set));
    }
  }
  return run;
}

absl::Status RunExperiment(const ExperimentConfig& cfg,
                           const std::string& out_dir,
                           const PipelineOptions& options) {
  TSMIA_RETURN_IF_ERROR(ValidateExperimentConfig(cfg));
  TSMIA_ASSIGN_OR_RETURN(std::vector<UserSeries> population,
                         LoadPopulation(cfg));
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    return absl::InternalError(
        absl::StrCat("cannot create ", out_dir, ": ", ec.message()));
  }
  TSMIA_RETURN_IF_ERROR(WriteStringToFile(
      (fs::path(out_dir) / "config.txt").string(), FormatExperimentConfig(cfg)));
  for (uint64_t seed : cfg.seeds) {
    absl::StatusOr<SeedRun> run = RunSeed(cfg, population, seed, options);
    if (!run.ok()) {
      return absl::Status(run.status().code(),
                          absl::StrCat("seed ", seed, ": ", run.status().message()));
    }
    const fs::path dir = SeedDir(out_dir, seed);
    fs::create_directories(dir / "roc");
    TSMIA_RETURN_IF_ERROR(WriteStringToFile((dir / "report.json").string(),
                                            FormatRunReportJson(run->report)));
    TSMIA_RETURN_IF_ERROR(WriteStringToFile(
        (dir / "scores.csv").string(), FormatScoresCsv(run->report.score_sets)));
    for (size_t i = 0; i < run->rocs.size(); ++i) {
      TSMIA_RETURN_IF_ERROR(WriteStringToFile(
          (dir / "roc" / RocFileName(run->report.metrics[i])).string(),
          FormatRocCsv(run->rocs[i])));
    }
  }
  return ReportBundle(out_dir).status();
}

absl::StatusOr<std::string> ReportBundle(const std::string& bundle_dir) {
  const fs::path root(bundle_dir);
  absl::StatusOr<std::string> config_text =
      ReadFileToString((root / "config.txt").string());
  if (!config_text.ok()) {
    return absl::NotFoundError(
        absl::StrCat(bundle_dir, " is not a report bundle (no config.txt)"));
  }
  TSMIA_ASSIGN_OR_RETURN(ExperimentConfig cfg,
                         ParseExperimentConfig(*config_text));
  std::vector<RunReport> reports;
  for (uint64_t seed : cfg.seeds) {
    const fs::path dir = SeedDir(bundle_dir, seed);
    if (!fs::exists(dir / "report.json")) continue;
    TSMIA_ASSIGN_OR_RETURN(std::string report_text,
                           ReadFileToString((dir / "report.json").string()));
    TSMIA_ASSIGN_OR_RETURN(RunReport stored, ParseRunReportJson(report_text));
    TSMIA_ASSIGN_OR_RETURN(std::string scores_text,
                           ReadFileToString((dir / "scores.csv").string()));
    TSMIA_ASSIGN_OR_RETURN(std::vector<GameScoreSet> sets,
                           ParseScoresCsv(scores_text));
    RunReport recomputed;
    recomputed.seed = stored.seed;
    recomputed.config_digest = stored.config_digest;
    for (const GameScoreSet& set : sets) {
      TSMIA_ASSIGN_OR_RETURN(GameMetrics m,
                             ComputeGameMetrics(set.game, set.scores));
      recomputed.metrics.push_back(std::move(m));
    }
    // Stored metrics must be reproducible from the stored scores.
    if (FormatRunReportJson(recomputed) != report_text) {
      return absl::DataLossError(absl::StrCat(
          "seed ", seed, ": report.json disagrees with scores.csv"));
    }
    reports.push_back(std::move(recomputed));
  }
  if (reports.empty()) {
    return absl::NotFoundError(
        absl::StrCat(bundle_dir, " contains no seed reports"));
  }
  TSMIA_ASSIGN_OR_RETURN(std::vector<MetricSummary> summary,
                         AggregateRuns(reports));
  const std::string table = FormatSummaryTable(summary);
  TSMIA_RETURN_IF_ERROR(
      WriteStringToFile((root / "summary.txt").string(), table));
  TSMIA_RETURN_IF_ERROR(WriteStringToFile((root / "summary.csv").string(),
                                          FormatSummaryCsv(summary)));
  return table;
}

}  // namespace tsmia
