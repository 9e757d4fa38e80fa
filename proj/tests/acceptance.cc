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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails. Arguments select criteria by number (default: all).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "test_util.h"
#include "tsmia/config.h"
#include "tsmia/csv_io.h"
#include "tsmia/dts.h"
#include "tsmia/forecaster.h"
#include "tsmia/lira.h"
#include "tsmia/pipeline.h"
#include "tsmia/roc.h"
#include "tsmia/series.h"
#include "tsmia/shadow.h"
#include "tsmia/signals.h"
#include "tsmia/status_macros.h"
#include "tsmia/synthetic.h"

namespace tsmia {
namespace {

namespace fs = std::filesystem;
using testing::RandomMatrix;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double Mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

std::string Join(const std::vector<double>& v) {
  return absl::StrJoin(v, " ", [](std::string* out, double x) {
    absl::StrAppend(out, absl::StrFormat("%.4f", x));
  });
}

// 1. Window count of a long series.
Outcome Windowing() {
  UserSeries series{"u", Matrix(1, 15000)};
  for (int t = 0; t < 15000; ++t) series.values(0, t) = std::sin(0.01 * t);
  const auto start = std::chrono::steady_clock::now();
  auto records = WindowSeries(series, 100, 20, 1);
  const double seconds = Seconds(start);
  if (!records.ok()) return {false, std::string(records.status().message())};
  const bool exact = records->front().origin == 99 &&
                     records->back().origin == 14979 &&
                     records->back().target(0, 19) == series.values(0, 14999);
  return {records->size() == 14881 && exact && seconds < 1.0,
          absl::StrFormat("%d records in %.3f s", records->size(), seconds)};
}

// 2. Error signals against naive loops; SMAPE scale invariance.
Outcome MetricOracles() {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> dim(1, 5);
  double worst = 0.0;
  auto track = [&](absl::StatusOr<double> got, double want) {
    worst = std::max(worst, got.ok() ? std::abs(*got - want) : INFINITY);
  };
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix y = RandomMatrix(dim(rng), dim(rng), rng);
    const Matrix y_hat = RandomMatrix(y.rows(), y.cols(), rng);
    const testing::NaiveMetrics o = testing::NaiveOracle(y, y_hat);
    track(Mse(y, y_hat), o.mse);
    track(Mae(y, y_hat), o.mae);
    track(Smape(y, y_hat), o.smape);
    track(Nd(y, y_hat), o.nd);
    const double s = std::clamp(o.smape, 1e-9, 1.0 - 1e-9);
    track(Rsmape(y, y_hat), std::log(s / (1.0 - s)));
  }
  double worst_scale = 0.0;
  std::uniform_real_distribution<double> scale(-100.0, 100.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix y = RandomMatrix(dim(rng), dim(rng), rng);
    const Matrix y_hat = RandomMatrix(y.rows(), y.cols(), rng);
    double c = scale(rng);
    if (std::abs(c) < 1e-3) c = 1.0;
    worst_scale = std::max(
        worst_scale, std::abs(*Smape(c * y, c * y_hat) - *Smape(y, y_hat)));
  }
  return {worst <= 1e-12 && worst_scale <= 1e-12,
          absl::StrFormat("max oracle error %.2e, max scaling error %.2e", worst,
                          worst_scale)};
}

// 3. Seasonality signal against a naive DFT; Parseval.
Outcome DftOracle() {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> rows(1, 4);
  std::uniform_int_distribution<int> cols(1, 24);
  double worst_signal = 0.0, worst_parseval = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix y = RandomMatrix(rows(rng), cols(rng), rng);
    const Matrix y_hat = RandomMatrix(y.rows(), y.cols(), rng);
    const Eigen::MatrixXcd fy = testing::NaiveDft2d(y);
    const double oracle =
        (fy.cwiseAbs() - testing::NaiveDft2d(y_hat).cwiseAbs()).norm();
    worst_signal =
        std::max(worst_signal, std::abs(*SeasonalitySignal(y, y_hat) - oracle));
    const double spectral =
        Dft2d(y).cwiseAbs2().sum() / static_cast<double>(y.size());
    worst_parseval = std::max(worst_parseval, std::abs(spectral - y.squaredNorm()));
  }
  return {worst_signal <= 1e-9 && worst_parseval <= 1e-9,
          absl::StrFormat("max signal error %.2e, max Parseval error %.2e",
                          worst_signal, worst_parseval)};
}

// 4. ROC/AUC against brute-force threshold and pairwise oracles.
Outcome RocOracle() {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> size(2, 100);
  std::uniform_int_distribution<int> level(0, 7);
  std::bernoulli_distribution coin(0.5);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = size(rng);
    std::vector<double> s(n);
    std::vector<int> y(n);
    for (int i = 0; i < n; ++i) {
      y[i] = coin(rng);
      s[i] = 0.5 * level(rng) + (y[i] ? 1.0 : 0.0);  // coarse levels force ties
    }
    y[0] = 1;
    y[1] = 0;
    auto roc = ComputeRoc(s, y);
    if (!roc.ok()) return {false, std::string(roc.status().message())};
    worst = std::max(worst, std::abs(Auc(*roc) - testing::PairwiseAuc(s, y)));
    for (double target : {0.0, 1e-3, 0.05, 0.1, 0.25, 0.5, 0.75, 1.0}) {
      worst = std::max(worst, std::abs(TprAtFpr(*roc, target) -
                                       testing::BruteTprAtFpr(s, y, target)));
    }
  }
  return {worst <= 1e-12, absl::StrFormat("max error %.2e over 200 sets", worst)};
}

// 5. LiRA identities.
Outcome LiraIdentities() {
  const std::vector<SignalId> signals = AllSignals();
  const int k = static_cast<int>(signals.size());
  const int records = 20, shadows = 8;
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n01;
  // Shadows 2j and 2j+1 share values and have opposite membership, so the
  // in and out fits coincide.
  std::vector<double> base(static_cast<size_t>(records) * shadows / 2 * k);
  for (double& v : base) v = n01(rng);
  MembershipMatrix membership(records, shadows);
  SignalTensor t;
  t.signals = signals;
  t.num_records = records;
  t.num_models = shadows + 1;
  for (int r = 0; r < records; ++r) {
    t.record_ids.push_back(absl::StrCat("r", r));
    for (int m = 0; m <= shadows; ++m) {
      if (m < shadows) membership.set(r, m, (m + r) % 2 == 0);
      for (int j = 0; j < k; ++j) {
        t.values.push_back(
            m < shadows ? base[(static_cast<size_t>(r) * shadows / 2 + m / 2) * k + j]
                        : 3.0 * n01(rng));
      }
    }
  }
  std::vector<int> rows(records);
  for (int r = 0; r < records; ++r) rows[r] = r;

  auto online = FitGaussianModel(t, membership, AttackMode::kOnline);
  if (!online.ok()) return {false, std::string(online.status().message())};
  double worst_equal = 0.0;
  const std::vector<double> equal =
      *LiraScores(*online, t, AttackMode::kOnline, rows);
  for (double log_score : equal) {
    worst_equal = std::max(worst_equal, std::abs(std::exp(log_score) - 1.0));
  }

  // Online additivity across signals on generic fits.
  SignalTensor generic = t;
  for (double& v : generic.values) v = n01(rng);
  auto fit = FitGaussianModel(generic, membership, AttackMode::kOnline);
  const std::vector<double> all =
      *LiraScores(*fit, generic, AttackMode::kOnline, rows);
  std::vector<double> sum(records, 0.0);
  for (SignalId id : signals) {
    const SignalId one[] = {id};
    const std::vector<double> single =
        *LiraScores(*fit, generic, AttackMode::kOnline, rows, one);
    for (int r = 0; r < records; ++r) sum[r] += single[r];
  }
  double worst_add = 0.0;
  for (int r = 0; r < records; ++r) {
    worst_add = std::max(worst_add, std::abs(all[r] - sum[r]));
  }

  // Offline score with the target at every out-mean.
  auto offline = FitGaussianModel(generic, membership, AttackMode::kOffline);
  double worst_half = 0.0;
  for (int used = 1; used <= k; ++used) {
    SignalTensor at_mean = generic;
    for (int r = 0; r < records; ++r) {
      for (int j = 0; j < k; ++j) {
        at_mean.values[(static_cast<size_t>(r) * t.num_models + shadows) * k + j] =
            offline->mu_out(r, j);
      }
    }
    const std::vector<SignalId> use(signals.begin(), signals.begin() + used);
    const std::vector<double> scores =
        *LiraScores(*offline, at_mean, AttackMode::kOffline, rows, use);
    for (double log_score : scores) {
      worst_half = std::max(worst_half,
                            std::abs(std::exp(log_score) - std::pow(0.5, used)));
    }
  }
  return {worst_equal <= 1e-12 && worst_add <= 1e-12 && worst_half <= 1e-12,
          absl::StrFormat("equal fits %.2e, offline 0.5^|S| %.2e, additivity %.2e",
                          worst_equal, worst_half, worst_add)};
}

// 6. Analytic gradients against extended-precision central differences.
Outcome GradientChecks() {
  std::mt19937_64 rng(6);
  double worst_mlp = 0.0, worst_dts = 0.0;
  for (uint64_t point = 0; point < 3; ++point) {
    const DenseNetwork forecaster =
        DenseNetwork::Initialized({50, 64, 10}, 600 + point);
    const Matrix x = RandomMatrix(50, 16, rng);
    const Matrix y = RandomMatrix(10, 16, rng);
    worst_mlp = std::max(worst_mlp, testing::ExtendedGradientCheckError(
                                        forecaster, x, y, Vector(),
                                        LossKind::kMae));

    const DtsDataset d = testing::SeparableSet(16, 10, 610 + point);
    const Matrix features = FeaturizeFlat(d.truth, d.predicted);
    Matrix labels(1, d.rows());
    for (int j = 0; j < d.rows(); ++j) labels(0, j) = d.labels[j];
    const Vector weights = Vector::LinSpaced(d.rows(), 0.5, 1.5);
    const DenseNetwork classifier =
        DenseNetwork::Initialized({30, 64, 32, 1}, 620 + point);
    worst_dts = std::max(worst_dts, testing::ExtendedGradientCheckError(
                                        classifier, features, labels, weights,
                                        LossKind::kBinaryCrossEntropy));
  }
  return {worst_mlp < 1e-4 && worst_dts < 1e-4,
          absl::StrFormat("max relative error: forecaster %.2e, DTS %.2e",
                          worst_mlp, worst_dts)};
}

// Desk-scale setup: U=60, T=1200, M=1, L=50, H=10, K=16, overfit MLP target.
ExperimentConfig DeskConfig() {
  ExperimentConfig cfg;
  cfg.synthetic.users = 60;
  cfg.synthetic.length = 1200;
  cfg.synthetic.variables = 1;
  cfg.lookback = 50;
  cfg.horizon = 10;
  cfg.stride = 5;
  cfg.split = {20, 4, 20, 16};
  cfg.shadow_models = 16;
  cfg.forecaster.hidden_sizes = {64};
  cfg.forecaster.max_epochs = 60;
  cfg.forecaster.batch_size = 256;
  cfg.forecaster.early_stopping = false;
  cfg.record_samples = 1000;
  cfg.seeds = {0, 1, 2, 3, 4};
  return cfg;
}

// Online multi-signal LiRA only, for the ablations.
ExperimentConfig AblationConfig() {
  ExperimentConfig cfg = DeskConfig();
  cfg.modes = {AttackMode::kOnline};
  cfg.attacks = {"lira"};
  cfg.lira_single_signal = false;
  return cfg;
}

using MetricKey = std::tuple<std::string, std::string, std::string>;

// (attack_id, mode, game) -> metrics, per seed.
absl::StatusOr<std::vector<std::map<MetricKey, GameMetrics>>> RunSeeds(
    const ExperimentConfig& cfg) {
  TSMIA_RETURN_IF_ERROR(ValidateExperimentConfig(cfg));
  TSMIA_ASSIGN_OR_RETURN(std::vector<UserSeries> population,
                         LoadPopulation(cfg));
  std::vector<std::map<MetricKey, GameMetrics>> out;
  for (uint64_t seed : cfg.seeds) {
    TSMIA_ASSIGN_OR_RETURN(SeedRun run,
                           RunSeed(cfg, population, seed, PipelineOptions()));
    std::map<MetricKey, GameMetrics>& metrics = out.emplace_back();
    for (const GameMetrics& m : run.report.metrics) {
      metrics[{m.attack_id, std::string(AttackModeName(m.mode)), m.game}] = m;
    }
  }
  return out;
}

double Tpr(const GameMetrics& m, double fpr) {
  for (size_t i = 0; i < m.fpr_targets.size(); ++i) {
    if (m.fpr_targets[i] == fpr) return m.tprs[i];
  }
  return NAN;
}

// 7. Online beats offline; user-level beats record-level for the best attack.
Outcome DeskLeakage() {
  const auto start = std::chrono::steady_clock::now();
  auto runs = RunSeeds(DeskConfig());
  const double seconds = Seconds(start);
  if (!runs.ok()) return {false, std::string(runs.status().message())};
  std::vector<double> online, offline;
  std::map<std::pair<std::string, std::string>, std::vector<double>> aucs;
  for (const auto& seed : *runs) {
    online.push_back(seed.at({"lira-multi", "online", kRecordGame}).auc);
    offline.push_back(seed.at({"lira-multi", "offline", kRecordGame}).auc);
    for (const auto& [key, m] : seed) {
      if (std::get<2>(key) == kRecordGame) {
        aucs[{std::get<0>(key), std::get<1>(key)}].push_back(m.auc);
      }
    }
  }
  // Best attack: highest mean record-level AUC.
  std::pair<std::string, std::string> best;
  double best_auc = -1.0;
  for (const auto& [key, v] : aucs) {
    if (Mean(v) > best_auc) {
      best_auc = Mean(v);
      best = key;
    }
  }
  int user_wins = 0;
  std::vector<double> user_tpr, record_tpr;
  for (const auto& seed : *runs) {
    user_tpr.push_back(Tpr(seed.at({best.first, best.second, kUserGame}), 0.0));
    record_tpr.push_back(
        Tpr(seed.at({best.first, best.second, kRecordGame}), 1e-3));
    user_wins += user_tpr.back() >= record_tpr.back();
  }
  const bool a = Mean(online) >= 0.65 && Mean(online) > Mean(offline);
  const bool b = user_wins >= 4;
  return {a && b && seconds < 600.0,
          absl::StrFormat(
              "(a) online AUC %.3f [%s] vs offline %.3f [%s]; (b) best %s-%s: "
              "user TPR@0%% [%s] >= record TPR@0.1%% [%s] in %d/5 seeds; %.0f s",
              Mean(online), Join(online), Mean(offline), Join(offline),
              best.first, best.second, Join(user_tpr), Join(record_tpr),
              user_wins, seconds)};
}

absl::StatusOr<std::vector<double>> RecordTprs(const ExperimentConfig& cfg) {
  TSMIA_ASSIGN_OR_RETURN(auto runs, RunSeeds(cfg));
  std::vector<double> tprs;
  for (const auto& seed : runs) {
    tprs.push_back(Tpr(seed.at({"lira-multi", "online", kRecordGame}), 1e-3));
  }
  return tprs;
}

Outcome AblationTrend(const ExperimentConfig& high, const ExperimentConfig& low,
                      absl::string_view high_name, absl::string_view low_name) {
  auto hi = RecordTprs(high);
  if (!hi.ok()) return {false, std::string(hi.status().message())};
  auto lo = RecordTprs(low);
  if (!lo.ok()) return {false, std::string(lo.status().message())};
  return {Median(*hi) >= Median(*lo),
          absl::StrFormat("median record TPR@0.1%%: %s %.4f [%s], %s %.4f [%s]",
                          high_name, Median(*hi), Join(*hi), low_name,
                          Median(*lo), Join(*lo))};
}

// 8. Longer horizons leak more.
Outcome HorizonAblation() {
  ExperimentConfig h20 = AblationConfig();
  h20.horizon = 20;
  ExperimentConfig h5 = AblationConfig();
  h5.horizon = 5;
  return AblationTrend(h20, h5, "H=20", "H=5");
}

// Split proportional to the desk setup's 20/4/20/16 of 60 users.
ExperimentConfig WithUsers(int users) {
  ExperimentConfig cfg = AblationConfig();
  cfg.synthetic.users = users;
  cfg.split.train = users / 3;
  cfg.split.test = users / 3;
  cfg.split.val = users / 15;
  cfg.split.aux = users - 2 * (users / 3) - users / 15;
  return cfg;
}

// 9. Larger populations leak less.
Outcome PopulationAblation() {
  return AblationTrend(WithUsers(40), WithUsers(120), "U=40", "U=120");
}

// 10. DTS dataset size and separable-set accuracy.
Outcome DtsSanity() {
  ExperimentConfig cfg;
  cfg.synthetic.users = 24;
  cfg.synthetic.length = 300;
  cfg.split = {8, 0, 8, 8};
  auto population = GeneratePopulation(cfg.synthetic);
  auto split = SplitUsers(
      [&] {
        std::vector<std::string> ids;
        for (const UserSeries& s : *population) ids.push_back(s.user_id);
        return ids;
      }(),
      cfg.split, 10);
  if (!population.ok() || !split.ok()) return {false, "setup failed"};
  RecordsByUser records;
  std::vector<ForecastRecord> source;
  for (const UserSeries& s : *population) {
    records[s.user_id] = *WindowSeries(s, 20, 5, 1);
  }
  for (const std::string& u : split->train_users) {
    source.insert(source.end(), records[u].begin(), records[u].end());
  }
  for (const std::string& u : split->test_users) {
    source.insert(source.end(), records[u].begin(), records[u].end());
  }
  source.resize(1000);
  ForecasterConfig ridge;
  ridge.kind = ForecasterKind::kRidge;
  ShadowPlanOptions po;
  po.validation_fraction = 0.0;
  auto plan = PlanShadows(*split, AttackMode::kOnline, 16, 11, po);
  if (!plan.ok()) return {false, std::string(plan.status().message())};
  auto ensemble = TrainShadowEnsemble(*plan, records, ridge, 1);
  if (!ensemble.ok()) return {false, std::string(ensemble.status().message())};
  bool counts = true;
  std::string detail;
  for (double f : {0.1, 0.013, 0.25}) {
    auto d = BuildDtsDataset(*ensemble, source, f, 12, 1);
    const int want = 16 * static_cast<int>(std::ceil(f * 1000 - 1e-9));
    counts = counts && d.ok() && d->rows() == want;
    absl::StrAppend(&detail, "f=", f, ": ", d.ok() ? d->rows() : -1, "/", want,
                    " rows; ");
  }
  const DtsDataset train = testing::SeparableSet(2000, 4, 13);
  const DtsDataset test = testing::SeparableSet(1000, 4, 14);
  auto clf = TrainDts(train, DtsConfig(), 15);
  if (!clf.ok()) return {false, std::string(clf.status().message())};
  const double accuracy = testing::DtsAccuracy(
      *DtsScores(*clf, test.truth, test.predicted), test.labels);
  absl::StrAppend(&detail, absl::StrFormat("held-out accuracy %.4f", accuracy));
  return {counts && accuracy >= 0.95, detail};
}

// 11. Two runs of the same config give byte-identical bundles.
Outcome Determinism() {
  ExperimentConfig cfg;
  cfg.synthetic.users = 12;
  cfg.synthetic.length = 300;
  cfg.split = {4, 1, 4, 3};
  cfg.shadow_models = 4;
  cfg.forecaster.hidden_sizes = {16};
  cfg.forecaster.max_epochs = 10;
  cfg.record_samples = 50;
  cfg.rmia_population = 100;
  cfg.dts.max_epochs = 5;
  cfg.seeds = {0, 1};
  const fs::path root = fs::temp_directory_path() / "tsmia_acceptance";
  fs::remove_all(root);
  std::map<std::string, std::string> bundles[2];
  for (int i = 0; i < 2; ++i) {
    const fs::path dir = root / absl::StrCat("run", i);
    PipelineOptions options;
    options.cache_dir = (dir / "cache").string();
    absl::Status s = RunExperiment(cfg, dir.string(), options);
    if (!s.ok()) return {false, std::string(s.message())};
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
      const fs::path rel = fs::relative(entry.path(), dir);
      if (*rel.begin() == "cache" || !entry.is_regular_file()) continue;
      bundles[i][rel.string()] = *ReadFileToString(entry.path().string());
    }
  }
  fs::remove_all(root);
  return {bundles[0] == bundles[1] && !bundles[0].empty(),
          absl::StrFormat("%d files compared", bundles[0].size())};
}

struct Criterion {
  int number;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace tsmia

int main(int argc, char** argv) {
  using tsmia::Criterion;
  const std::vector<Criterion> criteria = {
      {1, "windowing exactness", tsmia::Windowing},
      {2, "metric oracles", tsmia::MetricOracles},
      {3, "DFT oracle", tsmia::DftOracle},
      {4, "ROC/AUC oracle", tsmia::RocOracle},
      {5, "LiRA identities", tsmia::LiraIdentities},
      {6, "gradient checks", tsmia::GradientChecks},
      {7, "desk-scale leakage", tsmia::DeskLeakage},
      {8, "horizon ablation", tsmia::HorizonAblation},
      {9, "population ablation", tsmia::PopulationAblation},
      {10, "DTS sanity", tsmia::DtsSanity},
      {11, "determinism", tsmia::Determinism},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  int failures = 0;
  for (const Criterion& c : criteria) {
    if (!selected.empty() && !selected.count(c.number)) continue;
    const tsmia::Outcome outcome = c.run();
    failures += !outcome.pass;
    std::printf("criterion %2d %-22s %s  %s\n", c.number, c.name,
                outcome.pass ? "PASS" : "FAIL", outcome.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
