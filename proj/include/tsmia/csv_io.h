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

#ifndef TSMIA_CSV_IO_H_
#define TSMIA_CSV_IO_H_

#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/types/span.h"
#include "tsmia/series.h"

namespace tsmia {

// Long-format population files:
//
//   user_id,t,v1,...,vM
//   u000,0,0.25,...
//
// Rows of one user must carry consecutive, strictly increasing integer `t`
// (rows of different users may interleave). Users are returned in order of
// first appearance. Values are written with 17 significant digits so a
// write/read round trip is exact.
absl::StatusOr<std::vector<UserSeries>> ParsePopulationCsv(
    const std::string& contents);
absl::StatusOr<std::vector<UserSeries>> ReadPopulationCsv(
    const std::string& path);

std::string FormatPopulationCsv(absl::Span<const UserSeries> population);
absl::Status WritePopulationCsv(const std::string& path,
                                absl::Span<const UserSeries> population);

// Shared helpers for the other text formats.
absl::StatusOr<std::string> ReadFileToString(const std::string& path);
absl::Status WriteStringToFile(const std::string& path,
                               const std::string& contents);
std::string FormatDouble(double value);

}  // namespace tsmia

#endif  // TSMIA_CSV_IO_H_
