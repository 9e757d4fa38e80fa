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

#ifndef TSMIA_PIPELINE_H_
#define TSMIA_PIPELINE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "tsmia/config.h"
#include "tsmia/evaluation.h"
#include "tsmia/series.h"

namespace tsmia {

// End-to-end experiment for one seed:
//
//   split -> scale -> window -> target -> shadows -> signal tensor
//         -> attacks -> games -> report
//
// Stage seeds derive from the experiment seed with fixed purposes
// ("target", "shadow-plan", "rmia-population", "ensemble-labeled",
// "ensemble", "dts"), so e.g. changing K leaves the target untouched.
// Errors name the failing stage.
struct PipelineOptions {
  int jobs = 1;
  // Trained models and shadow predictions are reused from here when their
  // stage digests match; empty disables caching.
  std::string cache_dir;
};

// Generated or read population, per data.source.
absl::StatusOr<std::vector<UserSeries>> LoadPopulation(
    const ExperimentConfig& cfg);

// Writes the synthetic population of `cfg` to `path` in CSV long format.
absl::Status SynthesizePopulation(const ExperimentConfig& cfg,
                                  const std::string& path);

struct SeedRun {
  RunReport report;
  // ROC curve of each entry of report.metrics.
  std::vector<RocCurve> rocs;
};

absl::StatusOr<SeedRun> RunSeed(const ExperimentConfig& cfg,
                                const std::vector<UserSeries>& population,
                                uint64_t seed, const PipelineOptions& options);

// Report bundle written by RunExperiment:
//
//   config.txt                    canonical configuration
//   seed-<s>/report.json          RunReport metrics
//   seed-<s>/scores.csv           per-unit scores of every attack and game
//   seed-<s>/roc/<game>-<attack>-<mode>.csv
//   summary.txt, summary.csv      aggregate over seeds
//
// Caches (options.cache_dir; the CLI uses <out>/cache) are not part of the
// bundle.
absl::Status RunExperiment(const ExperimentConfig& cfg,
                           const std::string& out_dir,
                           const PipelineOptions& options);

// Recomputes every metric from the stored scores, checks it against the
// stored reports, aggregates, and rewrites summary.txt / summary.csv.
// Returns the summary table.
absl::StatusOr<std::string> ReportBundle(const std::string& bundle_dir);

}  // namespace tsmia

#endif  // TSMIA_PIPELINE_H_
