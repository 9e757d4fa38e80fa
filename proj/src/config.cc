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

#include "tsmia/config.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <set>

#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "tsmia/csv_io.h"
#include "tsmia/seeds.h"
#include "tsmia/status_macros.h"

namespace tsmia {
namespace {

// Which pipeline stages a key feeds; digests hash the keys of a stage set.
enum class Stage { kData, kTarget, kShadow, kAttack, kGame, kSeeds };

using Parser = std::function<absl::Status(absl::string_view, ExperimentConfig&)>;
using Formatter = std::function<std::string(const ExperimentConfig&)>;

struct KeySpec {
  std::string name;
  Stage stage;
  Parser parse;
  Formatter format;
};

const char* const kKnownAttacks[] = {"lira", "rmia", "ensemble", "dts"};

// Shortest text that parses back to the same double.
std::string ShortestDouble(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, end);
}

std::vector<absl::string_view> SplitList(absl::string_view value) {
  std::vector<absl::string_view> items;
  for (absl::string_view item : absl::StrSplit(value, ',')) {
    item = absl::StripAsciiWhitespace(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

absl::Status ParseIntValue(absl::string_view v, int& out) {
  if (!absl::SimpleAtoi(v, &out)) {
    return absl::InvalidArgumentError(absl::StrCat("not an integer: ", v));
  }
  return absl::OkStatus();
}

absl::Status ParseDoubleValue(absl::string_view v, double& out) {
  if (!absl::SimpleAtod(v, &out) || !std::isfinite(out)) {
    return absl::InvalidArgumentError(absl::StrCat("not a finite number: ", v));
  }
  return absl::OkStatus();
}

template <typename T>
using Accessor = T& (*)(ExperimentConfig&);

template <typename T>
T& Get(Accessor<T> get, const ExperimentConfig& c) {
  // Formatters only read through the accessor.
  return get(const_cast<ExperimentConfig&>(c));
}

KeySpec IntKey(std::string name, Stage stage, Accessor<int> get) {
  return {name, stage,
          [get](absl::string_view v, ExperimentConfig& c) {
            return ParseIntValue(v, get(c));
          },
          [get](const ExperimentConfig& c) {
            return absl::StrCat(Get(get, c));
          }};
}

KeySpec Uint64Key(std::string name, Stage stage, Accessor<uint64_t> get) {
  return {name, stage,
          [get](absl::string_view v, ExperimentConfig& c) {
            if (!absl::SimpleAtoi(v, &get(c))) {
              return absl::InvalidArgumentError(
                  absl::StrCat("not an unsigned integer: ", v));
            }
            return absl::OkStatus();
          },
          [get](const ExperimentConfig& c) {
            return absl::StrCat(Get(get, c));
          }};
}

KeySpec DoubleKey(std::string name, Stage stage, Accessor<double> get) {
  return {name, stage,
          [get](absl::string_view v, ExperimentConfig& c) {
            return ParseDoubleValue(v, get(c));
          },
          [get](const ExperimentConfig& c) {
            return ShortestDouble(Get(get, c));
          }};
}

KeySpec BoolKey(std::string name, Stage stage, Accessor<bool> get) {
  return {name, stage,
          [get](absl::string_view v, ExperimentConfig& c) {
            if (v != "true" && v != "false") {
              return absl::InvalidArgumentError(
                  absl::StrCat("expected true or false: ", v));
            }
            get(c) = v == "true";
            return absl::OkStatus();
          },
          [get](const ExperimentConfig& c) {
            return std::string(Get(get, c) ? "true" : "false");
          }};
}

KeySpec RangeKey(std::string name, Stage stage, Accessor<Range> get) {
  return {name, stage,
          [get](absl::string_view v, ExperimentConfig& c) {
            std::vector<absl::string_view> parts = SplitList(v);
            if (parts.size() != 2) {
              return absl::InvalidArgumentError(
                  absl::StrCat("expected lo,hi: ", v));
            }
            TSMIA_RETURN_IF_ERROR(ParseDoubleValue(parts[0], get(c).lo));
            return ParseDoubleValue(parts[1], get(c).hi);
          },
          [get](const ExperimentConfig& c) {
            return absl::StrCat(ShortestDouble(Get(get, c).lo), ",",
                                ShortestDouble(Get(get, c).hi));
          }};
}

KeySpec IntListKey(std::string name, Stage stage,
                   Accessor<std::vector<int>> get) {
  return {name, stage,
          [get](absl::string_view v, ExperimentConfig& c) {
            std::vector<int> values;
            for (absl::string_view item : SplitList(v)) {
              values.emplace_back();
              TSMIA_RETURN_IF_ERROR(ParseIntValue(item, values.back()));
            }
            get(c) = std::move(values);
            return absl::OkStatus();
          },
          [get](const ExperimentConfig& c) {
            return absl::StrJoin(Get(get, c), ",");
          }};
}

std::vector<KeySpec> BuildKeySpecs() {
  using C = ExperimentConfig;
  std::vector<KeySpec> k;
  k.push_back({"data.source", Stage::kData,
               [](absl::string_view v, C& c) {
                 c.data_source = std::string(v);
                 return absl::OkStatus();
               },
               [](const C& c) { return c.data_source; }});
  k.push_back({"data.csv_path", Stage::kData,
               [](absl::string_view v, C& c) {
                 c.csv_path = std::string(v);
                 return absl::OkStatus();
               },
               [](const C& c) { return c.csv_path; }});
  k.push_back(IntKey("synth.users", Stage::kData,
                     [](C& c) -> int& { return c.synthetic.users; }));
  k.push_back(IntKey("synth.length", Stage::kData,
                     [](C& c) -> int& { return c.synthetic.length; }));
  k.push_back(IntKey("synth.variables", Stage::kData,
                     [](C& c) -> int& { return c.synthetic.variables; }));
  k.push_back(Uint64Key("synth.seed", Stage::kData,
                        [](C& c) -> uint64_t& { return c.synthetic.seed; }));
  k.push_back(RangeKey("synth.amplitude", Stage::kData,
                       [](C& c) -> Range& { return c.synthetic.amplitude; }));
  k.push_back(RangeKey("synth.frequency", Stage::kData,
                       [](C& c) -> Range& { return c.synthetic.frequency; }));
  k.push_back(RangeKey("synth.phase", Stage::kData,
                       [](C& c) -> Range& { return c.synthetic.phase; }));
  k.push_back(RangeKey("synth.trend_slope", Stage::kData,
                       [](C& c) -> Range& { return c.synthetic.trend_slope; }));
  k.push_back(RangeKey("synth.noise_sigma", Stage::kData,
                       [](C& c) -> Range& { return c.synthetic.noise_sigma; }));
  k.push_back(IntKey("window.lookback", Stage::kData,
                     [](C& c) -> int& { return c.lookback; }));
  k.push_back(IntKey("window.horizon", Stage::kData,
                     [](C& c) -> int& { return c.horizon; }));
  k.push_back(IntKey("window.stride", Stage::kData,
                     [](C& c) -> int& { return c.stride; }));
  k.push_back(IntKey("split.train", Stage::kData,
                     [](C& c) -> int& { return c.split.train; }));
  k.push_back(IntKey("split.val", Stage::kData,
                     [](C& c) -> int& { return c.split.val; }));
  k.push_back(IntKey("split.test", Stage::kData,
                     [](C& c) -> int& { return c.split.test; }));
  k.push_back(IntKey("split.aux", Stage::kData,
                     [](C& c) -> int& { return c.split.aux; }));
  k.push_back({"forecaster.kind", Stage::kTarget,
               [](absl::string_view v, C& c) {
                 if (v == "mlp") {
                   c.forecaster.kind = ForecasterKind::kMlp;
                 } else if (v == "ridge") {
                   c.forecaster.kind = ForecasterKind::kRidge;
                 } else {
                   return absl::InvalidArgumentError(
                       absl::StrCat("unknown forecaster kind: ", v));
                 }
                 return absl::OkStatus();
               },
               [](const C& c) {
                 return std::string(ForecasterKindName(c.forecaster.kind));
               }});
  k.push_back(IntListKey(
      "forecaster.hidden", Stage::kTarget,
      [](C& c) -> std::vector<int>& { return c.forecaster.hidden_sizes; }));
  k.push_back(DoubleKey(
      "forecaster.learning_rate", Stage::kTarget,
      [](C& c) -> double& { return c.forecaster.learning_rate; }));
  k.push_back(IntKey("forecaster.max_epochs", Stage::kTarget,
                     [](C& c) -> int& { return c.forecaster.max_epochs; }));
  k.push_back(IntKey("forecaster.patience", Stage::kTarget,
                     [](C& c) -> int& { return c.forecaster.patience; }));
  k.push_back(IntKey("forecaster.batch_size", Stage::kTarget,
                     [](C& c) -> int& { return c.forecaster.batch_size; }));
  k.push_back(BoolKey(
      "forecaster.early_stopping", Stage::kTarget,
      [](C& c) -> bool& { return c.forecaster.early_stopping; }));
  k.push_back(DoubleKey("forecaster.ridge_lambda", Stage::kTarget,
                        [](C& c) -> double& { return c.forecaster.ridge_lambda; }));
  k.push_back({"shadow.modes", Stage::kShadow,
               [](absl::string_view v, C& c) {
                 std::set<AttackMode> modes;
                 for (absl::string_view item : SplitList(v)) {
                   std::optional<AttackMode> m = ParseAttackMode(item);
                   if (!m) {
                     return absl::InvalidArgumentError(
                         absl::StrCat("unknown attack mode: ", item));
                   }
                   modes.insert(*m);
                 }
                 c.modes.assign(modes.begin(), modes.end());
                 return absl::OkStatus();
               },
               [](const C& c) {
                 return absl::StrJoin(
                     c.modes, ",", [](std::string* out, AttackMode m) {
                       absl::StrAppend(out, AttackModeName(m));
                     });
               }});
  k.push_back(IntKey("shadow.models", Stage::kShadow,
                     [](C& c) -> int& { return c.shadow_models; }));
  k.push_back(DoubleKey("shadow.offline_fraction", Stage::kShadow,
                        [](C& c) -> double& { return c.offline_fraction; }));
  k.push_back(DoubleKey(
      "shadow.validation_fraction", Stage::kShadow,
      [](C& c) -> double& { return c.shadow_validation_fraction; }));
  k.push_back({"signals", Stage::kAttack,
               [](absl::string_view v, C& c) {
                 std::vector<SignalId> ids;
                 for (absl::string_view item : SplitList(v)) {
                   std::optional<SignalId> id = ParseSignalName(item);
                   if (!id) {
                     return absl::InvalidArgumentError(
                         absl::StrCat("unknown signal: ", item));
                   }
                   ids.push_back(*id);
                 }
                 c.signals = CanonicalSignalSet(std::move(ids));
                 return absl::OkStatus();
               },
               [](const C& c) {
                 return absl::StrJoin(c.signals, ",",
                                      [](std::string* out, SignalId id) {
                                        absl::StrAppend(out, SignalName(id));
                                      });
               }});
  k.push_back(IntKey("signals.trend_degree", Stage::kAttack,
                     [](C& c) -> int& { return c.trend_degree; }));
  k.push_back({"attacks", Stage::kAttack,
               [](absl::string_view v, C& c) {
                 c.attacks.clear();
                 for (absl::string_view item : SplitList(v)) {
                   c.attacks.emplace_back(item);
                 }
                 return absl::OkStatus();
               },
               [](const C& c) { return absl::StrJoin(c.attacks, ","); }});
  k.push_back(BoolKey("lira.single_signal", Stage::kAttack,
                      [](C& c) -> bool& { return c.lira_single_signal; }));
  k.push_back({"lira.variance", Stage::kAttack,
               [](absl::string_view v, C& c) {
                 if (v == "per-example") {
                   c.lira_variance = VarianceMode::kPerExample;
                 } else if (v == "global") {
                   c.lira_variance = VarianceMode::kGlobal;
                 } else {
                   return absl::InvalidArgumentError(
                       absl::StrCat("unknown variance mode: ", v));
                 }
                 return absl::OkStatus();
               },
               [](const C& c) {
                 return std::string(c.lira_variance == VarianceMode::kGlobal
                                        ? "global"
                                        : "per-example");
               }});
  k.push_back(DoubleKey("lira.sigma_floor", Stage::kAttack,
                        [](C& c) -> double& { return c.lira_sigma_floor; }));
  k.push_back(DoubleKey("rmia.gamma", Stage::kAttack,
                        [](C& c) -> double& { return c.rmia.gamma; }));
  k.push_back(DoubleKey("rmia.alpha", Stage::kAttack,
                        [](C& c) -> double& { return c.rmia.alpha; }));
  k.push_back(IntKey("rmia.population", Stage::kAttack,
                     [](C& c) -> int& { return c.rmia_population; }));
  k.push_back(IntKey("ensemble.executions", Stage::kAttack,
                     [](C& c) -> int& { return c.ensemble.executions; }));
  k.push_back(IntKey("ensemble.repetitions", Stage::kAttack,
                     [](C& c) -> int& { return c.ensemble.repetitions; }));
  k.push_back(IntKey("ensemble.subset_size", Stage::kAttack,
                     [](C& c) -> int& { return c.ensemble.subset_size; }));
  k.push_back(IntKey("ensemble.combinations", Stage::kAttack,
                     [](C& c) -> int& { return c.ensemble.combinations; }));
  k.push_back(DoubleKey(
      "ensemble.holdout_fraction", Stage::kAttack,
      [](C& c) -> double& { return c.ensemble.holdout_fraction; }));
  k.push_back(DoubleKey("dts.fraction", Stage::kAttack,
                        [](C& c) -> double& { return c.dts_fraction; }));
  k.push_back(IntListKey(
      "dts.hidden", Stage::kAttack,
      [](C& c) -> std::vector<int>& { return c.dts.hidden_sizes; }));
  k.push_back(DoubleKey("dts.learning_rate", Stage::kAttack,
                        [](C& c) -> double& { return c.dts.learning_rate; }));
  k.push_back(IntKey("dts.max_epochs", Stage::kAttack,
                     [](C& c) -> int& { return c.dts.max_epochs; }));
  k.push_back(IntKey("dts.patience", Stage::kAttack,
                     [](C& c) -> int& { return c.dts.patience; }));
  k.push_back(IntKey("dts.batch_size", Stage::kAttack,
                     [](C& c) -> int& { return c.dts.batch_size; }));
  k.push_back(DoubleKey(
      "dts.validation_fraction", Stage::kAttack,
      [](C& c) -> double& { return c.dts.validation_fraction; }));
  k.push_back(IntKey("game.record_samples", Stage::kGame,
                     [](C& c) -> int& { return c.record_samples; }));
  k.push_back(IntKey("game.user_samples", Stage::kGame,
                     [](C& c) -> int& { return c.user_samples; }));
  k.push_back(IntKey("game.records_per_user", Stage::kGame,
                     [](C& c) -> int& { return c.records_per_user; }));
  k.push_back({"seeds", Stage::kSeeds,
               [](absl::string_view v, C& c) {
                 c.seeds.clear();
                 for (absl::string_view item : SplitList(v)) {
                   uint64_t s = 0;
                   if (!absl::SimpleAtoi(item, &s)) {
                     return absl::InvalidArgumentError(
                         absl::StrCat("not a seed: ", item));
                   }
                   c.seeds.push_back(s);
                 }
                 return absl::OkStatus();
               },
               [](const C& c) { return absl::StrJoin(c.seeds, ","); }});
  return k;
}

const std::vector<KeySpec>& KeySpecs() {
  static const std::vector<KeySpec>* specs =
      new std::vector<KeySpec>(BuildKeySpecs());
  return *specs;
}

std::string Digest(const ExperimentConfig& cfg, const std::set<Stage>& stages,
                   absl::string_view extra = "") {
  std::string text(extra);
  for (const KeySpec& spec : KeySpecs()) {
    if (stages.count(spec.stage)) {
      absl::StrAppend(&text, spec.name, "=", spec.format(cfg), "\n");
    }
  }
  return absl::StrFormat("%016x", Fnv1a64(text));
}

absl::Status Check(bool ok, absl::string_view message) {
  return ok ? absl::OkStatus() : absl::InvalidArgumentError(message);
}

}  // namespace

bool ExperimentConfig::HasAttack(const std::string& name) const {
  return std::find(attacks.begin(), attacks.end(), name) != attacks.end();
}

ExperimentConfig DefaultExperimentConfig() { return ExperimentConfig(); }

absl::StatusOr<ExperimentConfig> ParseExperimentConfig(
    const std::string& text) {
  ExperimentConfig cfg;
  std::set<std::string> seen;
  bool schema_seen = false;
  int line_number = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    ++line_number;
    line = line.substr(0, line.find('#'));
    line = absl::StripAsciiWhitespace(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == absl::string_view::npos) {
      return absl::InvalidArgumentError(
          absl::StrCat("config line ", line_number, ": expected key = value"));
    }
    const std::string key(absl::StripAsciiWhitespace(line.substr(0, eq)));
    const absl::string_view value =
        absl::StripAsciiWhitespace(line.substr(eq + 1));
    if (!seen.insert(key).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("config line ", line_number, ": repeated key ", key));
    }
    if (!schema_seen) {
      if (key != "schema") {
        return absl::InvalidArgumentError(
            "config must start with the schema key");
      }
      if (value != kConfigSchema) {
        return absl::InvalidArgumentError(absl::StrCat(
            "unsupported config schema ", value, "; expected ", kConfigSchema));
      }
      schema_seen = true;
      continue;
    }
    const auto& specs = KeySpecs();
    auto it = std::find_if(specs.begin(), specs.end(),
                           [&](const KeySpec& s) { return s.name == key; });
    if (it == specs.end()) {
      return absl::InvalidArgumentError(
          absl::StrCat("config line ", line_number, ": unknown key ", key));
    }
    if (absl::Status s = it->parse(value, cfg); !s.ok()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "config line ", line_number, " (", key, "): ", s.message()));
    }
  }
  if (!schema_seen) {
    return absl::InvalidArgumentError("config has no schema key");
  }
  return cfg;
}

absl::StatusOr<ExperimentConfig> ReadExperimentConfig(const std::string& path) {
  TSMIA_ASSIGN_OR_RETURN(std::string text, ReadFileToString(path));
  absl::StatusOr<ExperimentConfig> cfg = ParseExperimentConfig(text);
  if (!cfg.ok()) {
    return absl::Status(cfg.status().code(),
                        absl::StrCat(path, ": ", cfg.status().message()));
  }
  return cfg;
}

std::string FormatExperimentConfig(const ExperimentConfig& cfg) {
  std::string out = absl::StrCat("schema = ", kConfigSchema, "\n");
  for (const KeySpec& spec : KeySpecs()) {
    absl::StrAppend(&out, spec.name, " = ", spec.format(cfg), "\n");
  }
  return out;
}

absl::Status ValidateExperimentConfig(const ExperimentConfig& cfg) {
  const bool synthetic = cfg.data_source == "synthetic";
  TSMIA_RETURN_IF_ERROR(Check(synthetic || cfg.data_source == "csv",
                              "data.source must be synthetic or csv"));
  TSMIA_RETURN_IF_ERROR(Check(synthetic || !cfg.csv_path.empty(),
                              "data.source = csv needs data.csv_path"));
  if (synthetic) TSMIA_RETURN_IF_ERROR(ValidateSyntheticConfig(cfg.synthetic));
  TSMIA_RETURN_IF_ERROR(
      Check(cfg.lookback >= 1 && cfg.horizon >= 1 && cfg.stride >= 1,
            "window lookback, horizon and stride must be >= 1"));
  const SplitSizes& s = cfg.split;
  TSMIA_RETURN_IF_ERROR(Check(s.train >= 1 && s.test >= 1,
                              "split needs >= 1 train and >= 1 test user"));
  TSMIA_RETURN_IF_ERROR(
      Check(s.val >= 0 && s.aux >= 0, "split sizes must be >= 0"));
  if (synthetic) {
    TSMIA_RETURN_IF_ERROR(
        Check(s.train + s.val + s.test + s.aux <= cfg.synthetic.users,
              "split sizes exceed synth.users"));
  }
  TSMIA_RETURN_IF_ERROR(ValidateForecasterConfig(cfg.forecaster));
  const bool early = cfg.forecaster.kind == ForecasterKind::kMlp &&
                     cfg.forecaster.early_stopping;
  TSMIA_RETURN_IF_ERROR(Check(!early || s.val >= 1,
                              "early stopping needs >= 1 validation user"));

  TSMIA_RETURN_IF_ERROR(
      Check(!cfg.attacks.empty(), "at least one attack is required"));
  std::set<std::string> attacks;
  for (const std::string& a : cfg.attacks) {
    TSMIA_RETURN_IF_ERROR(
        Check(std::find(std::begin(kKnownAttacks), std::end(kKnownAttacks),
                        a) != std::end(kKnownAttacks),
              absl::StrCat("unknown attack: ", a)));
    TSMIA_RETURN_IF_ERROR(
        Check(attacks.insert(a).second, absl::StrCat("repeated attack: ", a)));
  }
  TSMIA_RETURN_IF_ERROR(Check(!cfg.signals.empty(), "signal set is empty"));
  TSMIA_RETURN_IF_ERROR(
      Check(std::set<SignalId>(cfg.signals.begin(), cfg.signals.end()).size() ==
                cfg.signals.size(),
            "signal set has repeats"));
  TSMIA_RETURN_IF_ERROR(
      Check(cfg.trend_degree >= 1 && cfg.trend_degree < cfg.horizon,
            "signals.trend_degree must be in [1, horizon)"));

  // Every attack learns from shadow models.
  TSMIA_RETURN_IF_ERROR(Check(!cfg.modes.empty(), "shadow.modes is empty"));
  TSMIA_RETURN_IF_ERROR(
      Check(std::set<AttackMode>(cfg.modes.begin(), cfg.modes.end()).size() ==
                cfg.modes.size(),
            "shadow.modes has repeats"));
  TSMIA_RETURN_IF_ERROR(
      Check(cfg.shadow_models >= 2, "shadow.models must be >= 2"));
  TSMIA_RETURN_IF_ERROR(
      Check(cfg.offline_fraction > 0.0 && cfg.offline_fraction <= 1.0,
            "shadow.offline_fraction must be in (0, 1]"));
  TSMIA_RETURN_IF_ERROR(Check(cfg.shadow_validation_fraction >= 0.0 &&
                                  cfg.shadow_validation_fraction < 1.0,
                              "shadow.validation_fraction must be in [0, 1)"));
  TSMIA_RETURN_IF_ERROR(
      Check(!early || cfg.shadow_validation_fraction > 0.0,
            "early stopping needs shadow.validation_fraction > 0"));
  for (AttackMode m : cfg.modes) {
    TSMIA_RETURN_IF_ERROR(Check(m != AttackMode::kOffline || s.aux >= 1,
                                "offline shadows need >= 1 aux user"));
  }
  if (cfg.HasAttack("lira")) {
    TSMIA_RETURN_IF_ERROR(
        Check(cfg.lira_sigma_floor > 0.0, "lira.sigma_floor must be > 0"));
  }
  if (cfg.HasAttack("rmia")) {
    TSMIA_RETURN_IF_ERROR(ValidateRmiaConfig(cfg.rmia));
    TSMIA_RETURN_IF_ERROR(Check(
        std::any_of(cfg.signals.begin(), cfg.signals.end(),
                    [](SignalId id) { return ValidateRmiaSignal(id).ok(); }),
        "rmia needs a signal other than rsmape"));
    TSMIA_RETURN_IF_ERROR(
        Check(cfg.rmia_population >= 1, "rmia.population must be >= 1"));
    TSMIA_RETURN_IF_ERROR(
        Check(s.aux >= 1, "rmia draws its population from aux users"));
  }
  if (cfg.HasAttack("ensemble")) {
    TSMIA_RETURN_IF_ERROR(ValidateEnsembleConfig(cfg.ensemble));
  }
  if (cfg.HasAttack("dts")) {
    TSMIA_RETURN_IF_ERROR(Check(cfg.dts_fraction > 0.0 && cfg.dts_fraction <= 1.0,
                                "dts.fraction must be in (0, 1]"));
    TSMIA_RETURN_IF_ERROR(ValidateDtsConfig(cfg.dts));
  }
  TSMIA_RETURN_IF_ERROR(Check(cfg.record_samples >= 1,
                              "game.record_samples must be >= 1"));
  TSMIA_RETURN_IF_ERROR(
      Check(cfg.user_samples >= 0 && cfg.records_per_user >= 0,
            "game.user_samples and game.records_per_user must be >= 0"));
  TSMIA_RETURN_IF_ERROR(Check(!cfg.seeds.empty(), "seed list is empty"));
  std::set<uint64_t> seeds(cfg.seeds.begin(), cfg.seeds.end());
  TSMIA_RETURN_IF_ERROR(
      Check(seeds.size() == cfg.seeds.size(), "seed list has repeats"));
  return absl::OkStatus();
}

std::string ConfigDigest(const ExperimentConfig& cfg) {
  return Digest(cfg, {Stage::kData, Stage::kTarget, Stage::kShadow,
                      Stage::kAttack, Stage::kGame});
}

std::string TargetStageDigest(const ExperimentConfig& cfg) {
  return Digest(cfg, {Stage::kData, Stage::kTarget});
}

std::string ShadowStageDigest(const ExperimentConfig& cfg, AttackMode mode) {
  return Digest(cfg, {Stage::kData, Stage::kTarget, Stage::kShadow},
                absl::StrCat("mode=", AttackModeName(mode), "\n"));
}

}  // namespace tsmia
