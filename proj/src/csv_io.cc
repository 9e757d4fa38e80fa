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

#include "tsmia/csv_io.h"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"

namespace tsmia {

absl::StatusOr<std::string> ReadFileToString(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

absl::Status WriteStringToFile(const std::string& path,
                               const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return absl::UnavailableError(absl::StrCat("cannot write ", path));
  out << contents;
  out.close();
  if (!out) return absl::DataLossError(absl::StrCat("short write to ", path));
  return absl::OkStatus();
}

std::string FormatDouble(double value) {
  return absl::StrFormat("%.17g", value);
}

absl::StatusOr<std::vector<UserSeries>> ParsePopulationCsv(
    const std::string& contents) {
  std::vector<absl::string_view> lines = absl::StrSplit(contents, '\n');
  size_t line_no = 0;
  auto next_line = [&]() -> absl::string_view {
    return absl::StripTrailingAsciiWhitespace(lines[line_no++]);
  };
  if (lines.empty()) return absl::InvalidArgumentError("empty CSV");

  const std::vector<absl::string_view> header = absl::StrSplit(next_line(), ',');
  if (header.size() < 3 || header[0] != "user_id" || header[1] != "t") {
    return absl::InvalidArgumentError(
        "CSV header must be 'user_id,t,v1,...,vM'");
  }
  const size_t m = header.size() - 2;

  struct Pending {
    int64_t last_t = 0;
    std::vector<double> values;  // time-major, m per step
  };
  std::vector<std::string> order;
  std::map<std::string, Pending> users;

  while (line_no < lines.size()) {
    const size_t this_line = line_no + 1;
    absl::string_view line = next_line();
    if (line.empty()) continue;
    const std::vector<absl::string_view> fields = absl::StrSplit(line, ',');
    if (fields.size() != header.size()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "line ", this_line, ": inconsistent variable count (", fields.size(),
          " fields, header has ", header.size(), ")"));
    }
    const std::string user(fields[0]);
    if (user.empty()) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", this_line, ": empty user_id"));
    }
    int64_t t = 0;
    if (!absl::SimpleAtoi(fields[1], &t)) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", this_line, ": malformed time index '",
                       fields[1], "'"));
    }
    auto [it, inserted] = users.try_emplace(user);
    Pending& p = it->second;
    if (inserted) {
      order.push_back(user);
    } else if (t == p.last_t) {
      return absl::InvalidArgumentError(absl::StrCat(
          "line ", this_line, ": duplicate row for (", user, ", ", t, ")"));
    } else if (t < p.last_t) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", this_line, ": non-monotone time index for '",
                       user, "' (", t, " after ", p.last_t, ")"));
    } else if (t != p.last_t + 1) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", this_line, ": gap in time index for '", user,
                       "' (", p.last_t, " -> ", t, ")"));
    }
    p.last_t = t;
    for (size_t v = 0; v < m; ++v) {
      double x = 0.0;
      if (!absl::SimpleAtod(fields[2 + v], &x) || !std::isfinite(x)) {
        return absl::InvalidArgumentError(
            absl::StrCat("line ", this_line, ": malformed value '",
                         fields[2 + v], "'"));
      }
      p.values.push_back(x);
    }
  }

  std::vector<UserSeries> population;
  population.reserve(order.size());
  for (const std::string& user : order) {
    const Pending& p = users.at(user);
    const int64_t length = static_cast<int64_t>(p.values.size() / m);
    UserSeries s{user, Matrix(static_cast<Eigen::Index>(m), length)};
    for (int64_t t = 0; t < length; ++t) {
      for (size_t v = 0; v < m; ++v) s.values(v, t) = p.values[t * m + v];
    }
    population.push_back(std::move(s));
  }
  return population;
}

absl::StatusOr<std::vector<UserSeries>> ReadPopulationCsv(
    const std::string& path) {
  absl::StatusOr<std::string> contents = ReadFileToString(path);
  if (!contents.ok()) return contents.status();
  absl::StatusOr<std::vector<UserSeries>> parsed =
      ParsePopulationCsv(*contents);
  if (!parsed.ok()) {
    return absl::Status(parsed.status().code(),
                        absl::StrCat(path, ": ", parsed.status().message()));
  }
  return parsed;
}

std::string FormatPopulationCsv(absl::Span<const UserSeries> population) {
  const int m = population.empty() ? 1 : population.front().variables();
  std::string out = "user_id,t";
  for (int v = 1; v <= m; ++v) absl::StrAppend(&out, ",v", v);
  out += '\n';
  for (const UserSeries& s : population) {
    for (int t = 0; t < s.length(); ++t) {
      absl::StrAppend(&out, s.user_id, ",", t);
      for (int v = 0; v < s.variables(); ++v) {
        absl::StrAppend(&out, ",", FormatDouble(s.values(v, t)));
      }
      out += '\n';
    }
  }
  return out;
}

absl::Status WritePopulationCsv(const std::string& path,
                                absl::Span<const UserSeries> population) {
  return WriteStringToFile(path, FormatPopulationCsv(population));
}

}  // namespace tsmia
