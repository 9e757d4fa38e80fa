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

#ifndef TSMIA_STATUS_MACROS_H_
#define TSMIA_STATUS_MACROS_H_

#include "absl/status/status.h"
#include "absl/status/statusor.h"

#define TSMIA_RETURN_IF_ERROR(expr)           \
  do {                                        \
    const absl::Status _tsmia_status = (expr); \
    if (!_tsmia_status.ok()) return _tsmia_status; \
  } while (0)

#define TSMIA_STATUS_CONCAT_INNER(x, y) x##y
#define TSMIA_STATUS_CONCAT(x, y) TSMIA_STATUS_CONCAT_INNER(x, y)

#define TSMIA_ASSIGN_OR_RETURN_IMPL(statusor, lhs, rexpr) \
  auto statusor = (rexpr);                                \
  if (!statusor.ok()) return statusor.status();           \
  lhs = std::move(statusor).value()

// Evaluates `rexpr` (an absl::StatusOr<T>); on error returns its status,
// otherwise moves the value into `lhs`.
#define TSMIA_ASSIGN_OR_RETURN(lhs, rexpr) \
  TSMIA_ASSIGN_OR_RETURN_IMPL(             \
      TSMIA_STATUS_CONCAT(_tsmia_statusor_, __LINE__), lhs, rexpr)

#endif  // TSMIA_STATUS_MACROS_H_
