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

// tsmia command-line interface.
//
//   tsmia synth  --config <path> --out <file.csv>
//   tsmia run    --config <path> --out <dir> [--seed <n>]... [--jobs <n>]
//   tsmia report --out <dir>
//
// Without --config the built-in defaults are used. --seed values are
// appended to the configured seed list unless already present.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "tsmia/config.h"
#include "tsmia/pipeline.h"

namespace {

absl::StatusOr<tsmia::ExperimentConfig> LoadConfig(
    const std::string& path, const std::vector<uint64_t>& extra_seeds) {
  tsmia::ExperimentConfig cfg;
  if (!path.empty()) {
    absl::StatusOr<tsmia::ExperimentConfig> read =
        tsmia::ReadExperimentConfig(path);
    if (!read.ok()) return read.status();
    cfg = *std::move(read);
  }
  for (uint64_t seed : extra_seeds) {
    if (std::find(cfg.seeds.begin(), cfg.seeds.end(), seed) == cfg.seeds.end()) {
      cfg.seeds.push_back(seed);
    }
  }
  absl::Status valid = tsmia::ValidateExperimentConfig(cfg);
  if (!valid.ok()) return valid;
  return cfg;
}

int Fail(const absl::Status& status) {
  std::cerr << "tsmia: " << status << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Membership inference audits of time-series forecasters"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out;
  std::vector<uint64_t> seeds;
  int jobs = 1;

  CLI::App* synth = app.add_subcommand("synth", "write a synthetic population");
  synth->add_option("--config", config_path, "experiment config")
      ->check(CLI::ExistingFile);
  synth->add_option("--out", out, "output CSV file")->required();

  CLI::App* run = app.add_subcommand("run", "run an experiment");
  run->add_option("--config", config_path, "experiment config")
      ->check(CLI::ExistingFile);
  run->add_option("--seed", seeds, "append a seed to the seed list");
  run->add_option("--out", out, "report bundle directory")->required();
  run->add_option("--jobs", jobs, "worker threads")
      ->check(CLI::PositiveNumber);

  CLI::App* report = app.add_subcommand("report", "summarize a report bundle");
  report->add_option("--out", out, "report bundle directory")
      ->required()
      ->check(CLI::ExistingDirectory);

  CLI11_PARSE(app, argc, argv);

  if (report->parsed()) {
    absl::StatusOr<std::string> table = tsmia::ReportBundle(out);
    if (!table.ok()) return Fail(table.status());
    std::cout << *table;
    return 0;
  }

  absl::StatusOr<tsmia::ExperimentConfig> cfg = LoadConfig(config_path, seeds);
  if (!cfg.ok()) return Fail(cfg.status());
  if (synth->parsed()) {
    absl::Status s = tsmia::SynthesizePopulation(*cfg, out);
    return s.ok() ? 0 : Fail(s);
  }
  tsmia::PipelineOptions options;
  options.jobs = jobs;
  options.cache_dir = (std::filesystem::path(out) / "cache").string();
  absl::Status s = tsmia::RunExperiment(*cfg, out, options);
  if (!s.ok()) return Fail(s);
  absl::StatusOr<std::string> table = tsmia::ReportBundle(out);
  if (!table.ok()) return Fail(table.status());
  std::cout << *table;
  return 0;
}
