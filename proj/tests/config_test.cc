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

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "gtest/gtest.h"

namespace tsmia {
namespace {

TEST(ConfigTest, DefaultsAreValid) {
  EXPECT_TRUE(ValidateExperimentConfig(ExperimentConfig()).ok());
}

TEST(ConfigTest, FormatParseRoundTrip) {
  ExperimentConfig cfg;
  cfg.synthetic.users = 12;
  cfg.synthetic.noise_sigma = {0.1, 0.30000000000000004};
  cfg.horizon = 7;
  cfg.forecaster.kind = ForecasterKind::kRidge;
  cfg.forecaster.hidden_sizes = {8, 4};
  cfg.modes = {AttackMode::kOffline};
  cfg.signals = {SignalId::kMse, SignalId::kTrend};
  cfg.attacks = {"dts", "lira"};
  cfg.lira_variance = VarianceMode::kGlobal;
  cfg.rmia.alpha = 1.0 / 3.0;
  cfg.seeds = {3, 1, 4};
  const std::string text = FormatExperimentConfig(cfg);
  auto parsed = ParseExperimentConfig(text);
  ASSERT_TRUE(parsed.ok()) << parsed.status();
  EXPECT_EQ(FormatExperimentConfig(*parsed), text);
  EXPECT_EQ(parsed->rmia.alpha, 1.0 / 3.0);
  EXPECT_EQ(parsed->synthetic.noise_sigma.hi, 0.30000000000000004);
  EXPECT_EQ(parsed->seeds, (std::vector<uint64_t>{3, 1, 4}));
  EXPECT_EQ(parsed->attacks, (std::vector<std::string>{"dts", "lira"}));
}

TEST(ConfigTest, ParsesCommentsAndDefaults) {
  auto cfg = ParseExperimentConfig(
      "# experiment\n"
      "schema = tsmia-config/1\n"
      "\n"
      "window.horizon = 20   # longer\n"
      "attacks = lira, rmia\n");
  ASSERT_TRUE(cfg.ok()) << cfg.status();
  EXPECT_EQ(cfg->horizon, 20);
  EXPECT_EQ(cfg->lookback, ExperimentConfig().lookback);
  EXPECT_TRUE(cfg->HasAttack("rmia"));
  EXPECT_FALSE(cfg->HasAttack("dts"));
}

TEST(ConfigTest, RejectsMalformedText) {
  const char* const bad[] = {
      "window.horizon = 5\n",                                  // no schema
      "schema = tsmia-config/2\n",                             // wrong schema
      "window.horizon = 5\nschema = tsmia-config/1\n",         // schema late
      "schema = tsmia-config/1\nwindow.horizn = 5\n",          // unknown key
      "schema = tsmia-config/1\nseeds = 1\nseeds = 2\n",       // repeated key
      "schema = tsmia-config/1\nwindow.horizon = five\n",      // not an int
      "schema = tsmia-config/1\nlira.single_signal = yes\n",   // not a bool
      "schema = tsmia-config/1\nsignals = mse,wavelet\n",      // unknown signal
      "schema = tsmia-config/1\nshadow.modes = hybrid\n",      // unknown mode
      "schema = tsmia-config/1\nsynth.amplitude = 1\n",        // not a range
      "schema = tsmia-config/1\nwindow.horizon\n",             // no '='
  };
  for (const char* text : bad) {
    EXPECT_FALSE(ParseExperimentConfig(text).ok()) << text;
  }
}

TEST(ConfigTest, UnknownAttackIsAValidationError) {
  auto cfg = ParseExperimentConfig(
      "schema = tsmia-config/1\nattacks = lira,shokri\n");
  ASSERT_TRUE(cfg.ok());
  absl::Status s = ValidateExperimentConfig(*cfg);
  EXPECT_EQ(s.code(), absl::StatusCode::kInvalidArgument);
  EXPECT_NE(s.message().find("unknown attack: shokri"), absl::string_view::npos);
}

TEST(ConfigTest, ValidationRejectsInconsistentSettings) {
  using Mutation = std::function<void(ExperimentConfig&)>;
  const std::vector<std::pair<std::string, Mutation>> cases = {
      {"data.source", [](auto& c) { c.data_source = "sql"; }},
      {"csv_path", [](auto& c) { c.data_source = "csv"; }},
      {"synth.users", [](auto& c) { c.synthetic.users = 0; }},
      {"lookback", [](auto& c) { c.lookback = 0; }},
      {"horizon", [](auto& c) { c.horizon = 0; }},
      {"stride", [](auto& c) { c.stride = 0; }},
      {"train", [](auto& c) { c.split.train = 0; }},
      {"test", [](auto& c) { c.split.test = 0; }},
      {"aux", [](auto& c) { c.split.aux = -1; }},
      {"exceed", [](auto& c) { c.split.aux = 100; }},
      {"forecaster", [](auto& c) { c.forecaster.learning_rate = 0.0; }},
      {"early stopping val", [](auto& c) { c.split.val = 0; }},
      {"no attacks", [](auto& c) { c.attacks.clear(); }},
      {"unknown attack", [](auto& c) { c.attacks.push_back("mentr"); }},
      {"repeated attack", [](auto& c) { c.attacks.push_back("lira"); }},
      {"no signals", [](auto& c) { c.signals.clear(); }},
      {"repeated signal",
       [](auto& c) { c.signals = {SignalId::kMse, SignalId::kMse}; }},
      {"trend degree", [](auto& c) { c.trend_degree = c.horizon; }},
      {"no modes", [](auto& c) { c.modes.clear(); }},
      {"repeated mode",
       [](auto& c) { c.modes = {AttackMode::kOnline, AttackMode::kOnline}; }},
      {"one shadow", [](auto& c) { c.shadow_models = 1; }},
      {"offline fraction", [](auto& c) { c.offline_fraction = 0.0; }},
      {"shadow validation", [](auto& c) { c.shadow_validation_fraction = 1.0; }},
      {"shadow validation with early stopping",
       [](auto& c) { c.shadow_validation_fraction = 0.0; }},
      {"offline without aux",
       [](auto& c) {
         c.split.aux = 0;
         c.attacks = {"lira"};
       }},
      {"sigma floor", [](auto& c) { c.lira_sigma_floor = 0.0; }},
      {"rmia gamma", [](auto& c) { c.rmia.gamma = 0.0; }},
      {"rmia rsmape only", [](auto& c) { c.signals = {SignalId::kRsmape}; }},
      {"rmia population", [](auto& c) { c.rmia_population = 0; }},
      {"rmia without aux",
       [](auto& c) {
         c.split.aux = 0;
         c.modes = {AttackMode::kOnline};
       }},
      {"ensemble", [](auto& c) { c.ensemble.subset_size = 2; }},
      {"dts fraction", [](auto& c) { c.dts_fraction = 0.0; }},
      {"dts config", [](auto& c) { c.dts.batch_size = 0; }},
      {"record samples", [](auto& c) { c.record_samples = 0; }},
      {"user samples", [](auto& c) { c.user_samples = -1; }},
      {"no seeds", [](auto& c) { c.seeds.clear(); }},
      {"repeated seeds", [](auto& c) { c.seeds = {1, 1}; }},
  };
  for (const auto& [name, mutate] : cases) {
    ExperimentConfig cfg;
    mutate(cfg);
    EXPECT_FALSE(ValidateExperimentConfig(cfg).ok()) << name;
  }
}

TEST(ConfigTest, DigestsFollowStageDependencies) {
  const ExperimentConfig base;
  ExperimentConfig more_shadows = base;
  more_shadows.shadow_models = 32;
  EXPECT_EQ(TargetStageDigest(more_shadows), TargetStageDigest(base));
  EXPECT_NE(ShadowStageDigest(more_shadows, AttackMode::kOnline),
            ShadowStageDigest(base, AttackMode::kOnline));

  ExperimentConfig other_attacks = base;
  other_attacks.attacks = {"lira"};
  other_attacks.rmia.gamma = 2.0;
  EXPECT_EQ(ShadowStageDigest(other_attacks, AttackMode::kOffline),
            ShadowStageDigest(base, AttackMode::kOffline));
  EXPECT_NE(ConfigDigest(other_attacks), ConfigDigest(base));

  ExperimentConfig other_seeds = base;
  other_seeds.seeds = {7, 8};
  EXPECT_EQ(ConfigDigest(other_seeds), ConfigDigest(base));

  ExperimentConfig other_horizon = base;
  other_horizon.horizon = 20;
  EXPECT_NE(TargetStageDigest(other_horizon), TargetStageDigest(base));
  EXPECT_NE(ShadowStageDigest(base, AttackMode::kOnline),
            ShadowStageDigest(base, AttackMode::kOffline));
  EXPECT_EQ(ConfigDigest(base).size(), 16u);
}

}  // namespace
}  // namespace tsmia
