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

#include "tsmia/shadow.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "json.hpp"
#include "tsmia/csv_io.h"
#include "tsmia/model_io.h"
#include "tsmia/parallel.h"
#include "tsmia/seeds.h"
#include "tsmia/status_macros.h"

namespace tsmia {
namespace {

constexpr int kManifestVersion = 1;

bool Contains(const std::vector<std::string>& sorted, const std::string& x) {
  return std::binary_search(sorted.begin(), sorted.end(), x);
}

int CeilFraction(double fraction, size_t n) {
  return static_cast<int>(std::ceil(fraction * static_cast<double>(n) - 1e-9));
}

// Swaps users between shadow training sets until every pool user is trained
// on by at least one shadow and left out of at least one. Each swap fixes one
// user without breaking the other, so at most |pool| swaps are needed.
absl::Status RepairCoverage(const std::vector<std::string>& pool,
                            ShadowPlan& plan) {
  const int k = plan.num_models();
  std::map<std::string, int> in_count;
  for (const std::string& u : pool) in_count[u] = 0;
  for (const auto& users : plan.training_users) {
    for (const std::string& u : users) ++in_count[u];
  }
  for (size_t round = 0; round <= pool.size(); ++round) {
    auto offender = std::find_if(pool.begin(), pool.end(), [&](const auto& u) {
      return in_count[u] == 0 || in_count[u] == k;
    });
    if (offender == pool.end()) return absl::OkStatus();
    const std::string u = *offender;
    const bool never_in = in_count[u] == 0;

    std::vector<std::pair<int, std::string>> candidates;
    for (int i = 0; i < k; ++i) {
      const auto& train = plan.training_users[i];
      if (never_in) {
        if (Contains(train, u) || Contains(plan.validation_users[i], u)) {
          continue;
        }
        for (const std::string& v : train) {
          if (in_count[v] >= 2) candidates.emplace_back(i, v);
        }
      } else {
        for (const std::string& v : pool) {
          if (in_count[v] <= k - 2 && !Contains(train, v) &&
              !Contains(plan.validation_users[i], v)) {
            candidates.emplace_back(i, v);
          }
        }
      }
    }
    if (candidates.empty()) {
      return absl::FailedPreconditionError(absl::StrCat(
          "cannot give user '", u, "' both in and out shadows with ", k,
          " models over a pool of ", pool.size(), " users"));
    }
    Rng rng = MakeRng(plan.seed, "shadow-repair", round);
    std::uniform_int_distribution<size_t> pick(0, candidates.size() - 1);
    const auto& [i, v] = candidates[pick(rng)];
    auto& train = plan.training_users[i];
    const std::string& removed = never_in ? v : u;
    const std::string& added = never_in ? u : v;
    train.erase(std::find(train.begin(), train.end(), removed));
    train.insert(std::upper_bound(train.begin(), train.end(), added), added);
    --in_count[removed];
    ++in_count[added];
    ++plan.repairs;
  }
  return absl::InternalError("shadow coverage repair did not converge");
}

}  // namespace

absl::string_view AttackModeName(AttackMode mode) {
  return mode == AttackMode::kOnline ? "online" : "offline";
}

std::optional<AttackMode> ParseAttackMode(absl::string_view name) {
  if (name == "online") return AttackMode::kOnline;
  if (name == "offline") return AttackMode::kOffline;
  return std::nullopt;
}

std::vector<std::string> ShadowPlan::Subset(int shadow) const {
  std::vector<std::string> out;
  std::merge(training_users[shadow].begin(), training_users[shadow].end(),
             validation_users[shadow].begin(), validation_users[shadow].end(),
             std::back_inserter(out));
  return out;
}

bool ShadowPlan::TrainsOn(int shadow, const std::string& user) const {
  return Contains(training_users[shadow], user);
}

absl::StatusOr<ShadowPlan> PlanShadows(const PopulationSplit& split,
                                       AttackMode mode, int num_models,
                                       uint64_t seed,
                                       const ShadowPlanOptions& options) {
  if (num_models < 2) {
    return absl::InvalidArgumentError("at least 2 shadow models are required");
  }
  if (!(options.validation_fraction >= 0.0 &&
        options.validation_fraction < 1.0)) {
    return absl::InvalidArgumentError("validation fraction must be in [0, 1)");
  }
  std::vector<std::string> pool;
  int subset_size = 0;
  if (mode == AttackMode::kOnline) {
    pool = split.train_users;
    pool.insert(pool.end(), split.test_users.begin(), split.test_users.end());
    if (pool.size() < 2) {
      return absl::FailedPreconditionError(
          "online shadows need at least 2 train/test users");
    }
    subset_size = CeilFraction(0.5, pool.size());
  } else {
    if (!(options.offline_fraction > 0.0 && options.offline_fraction <= 1.0)) {
      return absl::InvalidArgumentError("offline fraction must be in (0, 1]");
    }
    pool = split.aux_users;
    subset_size = CeilFraction(options.offline_fraction, pool.size());
    if (subset_size < 1) {
      return absl::FailedPreconditionError(
          "offline shadows need at least 1 aux user");
    }
  }
  int validation_size = 0;
  if (options.validation_fraction > 0.0) {
    if (subset_size < 2) {
      return absl::FailedPreconditionError(absl::StrCat(
          "shadow subsets of ", subset_size,
          " users cannot hold out validation users"));
    }
    validation_size = std::clamp(
        static_cast<int>(std::lround(options.validation_fraction * subset_size)),
        1, subset_size - 1);
  }

  ShadowPlan plan;
  plan.mode = mode;
  plan.seed = seed;
  for (int i = 0; i < num_models; ++i) {
    std::vector<std::string> drawn = pool;
    Rng rng = MakeRng(seed, "shadow-subset", i);
    std::shuffle(drawn.begin(), drawn.end(), rng);
    std::vector<std::string> val(drawn.begin(), drawn.begin() + validation_size);
    std::vector<std::string> train(drawn.begin() + validation_size,
                                   drawn.begin() + subset_size);
    std::sort(val.begin(), val.end());
    std::sort(train.begin(), train.end());
    plan.validation_users.push_back(std::move(val));
    plan.training_users.push_back(std::move(train));
  }
  if (mode == AttackMode::kOnline) {
    TSMIA_RETURN_IF_ERROR(RepairCoverage(pool, plan));
  }
  return plan;
}

MembershipMatrix::MembershipMatrix(int records, int models)
    : records_(records),
      models_(models),
      data_(static_cast<size_t>(records) * models, 0) {}

int MembershipMatrix::InCount(int record) const {
  int count = 0;
  for (int i = 0; i < models_; ++i) count += at(record, i) ? 1 : 0;
  return count;
}

MembershipMatrix BuildMembership(const ShadowPlan& plan,
                                 absl::Span<const ForecastRecord> records) {
  MembershipMatrix out(static_cast<int>(records.size()), plan.num_models());
  for (size_t r = 0; r < records.size(); ++r) {
    for (int i = 0; i < plan.num_models(); ++i) {
      out.set(static_cast<int>(r), i, plan.TrainsOn(i, records[r].user_id));
    }
  }
  return out;
}

absl::StatusOr<ShadowEnsemble> TrainShadowEnsemble(
    const ShadowPlan& plan, const RecordsByUser& records,
    const ForecasterConfig& target_config, int jobs) {
  auto gather = [&](const std::vector<std::string>& users) {
    std::vector<ForecastRecord> out;
    for (const std::string& u : users) {
      auto it = records.find(u);
      if (it != records.end()) {
        out.insert(out.end(), it->second.begin(), it->second.end());
      }
    }
    return out;
  };
  ShadowEnsemble ensemble;
  ensemble.plan = plan;
  ensemble.models.resize(plan.num_models());
  TSMIA_RETURN_IF_ERROR(ParallelFor(
      plan.num_models(), jobs, [&](int i) -> absl::Status {
        ForecasterConfig cfg = target_config;
        cfg.seed = DeriveSeed(plan.seed, "shadow", static_cast<uint64_t>(i));
        const std::vector<ForecastRecord> train =
            gather(plan.training_users[i]);
        const std::vector<ForecastRecord> val =
            gather(plan.validation_users[i]);
        absl::StatusOr<TrainedForecaster> model =
            train.empty()
                ? absl::FailedPreconditionError("no training records")
                : FitForecaster(cfg, train, val);
        if (!model.ok()) {
          return absl::Status(model.status().code(),
                              absl::StrCat("shadow ", i, ": ",
                                           model.status().message()));
        }
        ensemble.models[i] = *std::move(model);
        return absl::OkStatus();
      }));
  return ensemble;
}

std::string RecordId(const ForecastRecord& record) {
  return absl::StrCat(record.user_id, ":", record.origin);
}

std::optional<int> SignalTensor::column(SignalId id) const {
  auto it = std::find(signals.begin(), signals.end(), id);
  if (it == signals.end()) return std::nullopt;
  return static_cast<int>(it - signals.begin());
}

Matrix PredictRecords(const TrainedForecaster& model,
                      absl::Span<const ForecastRecord> records) {
  return PredictFlat(model, FlattenInputs(records));
}

absl::StatusOr<SignalTensor> ComputeSignalTensor(
    absl::Span<const Matrix> predictions,
    absl::Span<const ForecastRecord> records, std::vector<SignalId> signals,
    const SignalOptions& options, int jobs) {
  TSMIA_ASSIGN_OR_RETURN(ForecastShape shape, ShapeOf(records));
  if (predictions.size() < 2) {
    return absl::InvalidArgumentError(
        "need predictions of at least one shadow and the target");
  }
  for (size_t m = 0; m < predictions.size(); ++m) {
    if (predictions[m].rows() != shape.output_size() ||
        predictions[m].cols() != static_cast<Eigen::Index>(records.size())) {
      return absl::InvalidArgumentError(absl::StrCat(
          "predictions of model ", m, " are ", predictions[m].rows(), "x",
          predictions[m].cols(), ", expected ", shape.output_size(), "x",
          records.size()));
    }
  }
  SignalTensor tensor;
  tensor.signals = CanonicalSignalSet(std::move(signals));
  if (tensor.signals.empty()) {
    return absl::InvalidArgumentError("empty signal set");
  }
  tensor.num_records = static_cast<int>(records.size());
  tensor.num_models = static_cast<int>(predictions.size());
  tensor.values.resize(static_cast<size_t>(tensor.num_records) *
                       tensor.num_models * tensor.signals.size());
  for (const ForecastRecord& r : records) tensor.record_ids.push_back(RecordId(r));

  const size_t s = tensor.signals.size();
  TSMIA_RETURN_IF_ERROR(ParallelFor(
      tensor.num_records, jobs, [&](int r) -> absl::Status {
        for (int m = 0; m < tensor.num_models; ++m) {
          const Matrix y_hat = predictions[m].col(r).reshaped(
              shape.variables, shape.horizon);
          absl::StatusOr<SignalVector> v = ComputeSignalVector(
              records[r].target, y_hat, tensor.signals, options);
          if (!v.ok() || !v->values.allFinite()) {
            return absl::InvalidArgumentError(absl::StrCat(
                "record ", tensor.record_ids[r], ", model ", m, ": ",
                v.ok() ? "non-finite signal" : v.status().message()));
          }
          std::copy(v->values.begin(), v->values.end(),
                    tensor.values.begin() +
                        (static_cast<size_t>(r) * tensor.num_models + m) * s);
        }
        return absl::OkStatus();
      }));
  return tensor;
}

absl::StatusOr<SignalTensor> ComputeSignalTensor(
    const ShadowEnsemble& ensemble, const TrainedForecaster& target,
    absl::Span<const ForecastRecord> records, std::vector<SignalId> signals,
    const SignalOptions& options, int jobs) {
  std::vector<Matrix> predictions;
  for (const TrainedForecaster& m : ensemble.models) {
    predictions.push_back(PredictRecords(m, records));
  }
  predictions.push_back(PredictRecords(target, records));
  return ComputeSignalTensor(predictions, records, std::move(signals), options,
                             jobs);
}

std::string FormatSignalTensor(const SignalTensor& tensor) {
  std::string out = "record_id,model_index,signal_id,value\n";
  for (int r = 0; r < tensor.num_records; ++r) {
    for (int m = 0; m < tensor.num_models; ++m) {
      for (int k = 0; k < tensor.num_signals(); ++k) {
        absl::StrAppend(&out, tensor.record_ids[r], ",", m, ",",
                        SignalName(tensor.signals[k]), ",",
                        FormatDouble(tensor.at(r, m, k)), "\n");
      }
    }
  }
  return out;
}

std::string FormatPredictions(absl::Span<const Matrix> predictions) {
  std::string out = absl::StrCat("predictions ", predictions.size(), "\n");
  for (size_t m = 0; m < predictions.size(); ++m) {
    absl::StrAppend(&out, "model ", m, " ", predictions[m].rows(), " ",
                    predictions[m].cols(), "\n");
    for (Eigen::Index i = 0; i < predictions[m].size(); ++i) {
      absl::StrAppend(&out, FormatDouble(predictions[m].data()[i]), "\n");
    }
  }
  return out;
}

absl::StatusOr<std::vector<Matrix>> ParsePredictions(const std::string& text) {
  std::vector<absl::string_view> lines =
      absl::StrSplit(text, '\n', absl::SkipEmpty());
  size_t pos = 0;
  auto fields = [&](absl::string_view key,
                    size_t n) -> absl::StatusOr<std::vector<int64_t>> {
    if (pos >= lines.size()) {
      return absl::InvalidArgumentError("prediction cache truncated");
    }
    std::vector<absl::string_view> parts = absl::StrSplit(lines[pos++], ' ');
    std::vector<int64_t> out(n);
    if (parts.size() != n + 1 || parts[0] != key) {
      return absl::InvalidArgumentError(
          absl::StrCat("prediction cache line ", pos, ": expected '", key, "'"));
    }
    for (size_t i = 0; i < n; ++i) {
      if (!absl::SimpleAtoi(parts[i + 1], &out[i]) || out[i] < 0) {
        return absl::InvalidArgumentError(
            absl::StrCat("prediction cache line ", pos, ": bad integer"));
      }
    }
    return out;
  };
  TSMIA_ASSIGN_OR_RETURN(std::vector<int64_t> count, fields("predictions", 1));
  std::vector<Matrix> out;
  for (int64_t m = 0; m < count[0]; ++m) {
    TSMIA_ASSIGN_OR_RETURN(std::vector<int64_t> dims, fields("model", 3));
    if (dims[0] != m) {
      return absl::InvalidArgumentError("prediction cache models out of order");
    }
    Matrix p(dims[1], dims[2]);
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      if (pos >= lines.size() || !absl::SimpleAtod(lines[pos++], &p.data()[i])) {
        return absl::InvalidArgumentError(
            absl::StrCat("prediction cache line ", pos, ": bad value"));
      }
    }
    out.push_back(std::move(p));
  }
  if (pos != lines.size()) {
    return absl::InvalidArgumentError("trailing data in prediction cache");
  }
  return out;
}

absl::Status SaveShadowEnsemble(const std::string& dir,
                                const ShadowEnsemble& ensemble,
                                const std::string& digest) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    return absl::UnavailableError(
        absl::StrCat("cannot create ", dir, ": ", ec.message()));
  }
  for (size_t i = 0; i < ensemble.models.size(); ++i) {
    TSMIA_RETURN_IF_ERROR(SaveForecaster(
        absl::StrCat(dir, "/shadow_", i, ".model"), ensemble.models[i]));
  }
  nlohmann::json manifest = {
      {"version", kManifestVersion},
      {"digest", digest},
      {"mode", std::string(AttackModeName(ensemble.plan.mode))},
      {"seed", ensemble.plan.seed},
      {"repairs", ensemble.plan.repairs},
      {"training_users", ensemble.plan.training_users},
      {"validation_users", ensemble.plan.validation_users},
  };
  // Written last: a manifest marks a complete cache.
  return WriteStringToFile(dir + "/manifest.json", manifest.dump(2) + "\n");
}

absl::StatusOr<ShadowEnsemble> LoadShadowEnsemble(const std::string& dir,
                                                  const std::string& digest) {
  absl::StatusOr<std::string> text = ReadFileToString(dir + "/manifest.json");
  if (!text.ok()) {
    return absl::NotFoundError(absl::StrCat("no shadow cache in ", dir));
  }
  ShadowEnsemble ensemble;
  try {
    const nlohmann::json manifest = nlohmann::json::parse(*text);
    if (manifest.at("version").get<int>() != kManifestVersion ||
        manifest.at("digest").get<std::string>() != digest) {
      return absl::NotFoundError(absl::StrCat("stale shadow cache in ", dir));
    }
    std::optional<AttackMode> mode =
        ParseAttackMode(manifest.at("mode").get<std::string>());
    if (!mode) return absl::InvalidArgumentError("bad mode in manifest");
    ensemble.plan.mode = *mode;
    ensemble.plan.seed = manifest.at("seed").get<uint64_t>();
    ensemble.plan.repairs = manifest.at("repairs").get<int>();
    ensemble.plan.training_users = manifest.at("training_users")
                                       .get<std::vector<std::vector<std::string>>>();
    ensemble.plan.validation_users =
        manifest.at("validation_users")
            .get<std::vector<std::vector<std::string>>>();
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("corrupt shadow manifest in ", dir, ": ", e.what()));
  }
  if (ensemble.plan.training_users.size() !=
      ensemble.plan.validation_users.size()) {
    return absl::InvalidArgumentError("inconsistent shadow manifest");
  }
  for (int i = 0; i < ensemble.plan.num_models(); ++i) {
    TSMIA_ASSIGN_OR_RETURN(
        TrainedForecaster model,
        LoadForecaster(absl::StrCat(dir, "/shadow_", i, ".model")));
    ensemble.models.push_back(std::move(model));
  }
  return ensemble;
}

}  // namespace tsmia
