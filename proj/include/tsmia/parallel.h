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

#ifndef TSMIA_PARALLEL_H_
#define TSMIA_PARALLEL_H_

#include <functional>

#include "absl/status/status.h"

namespace tsmia {

// Runs fn(0..n-1) on up to `jobs` threads. Returns the error of the lowest
// failing index, so the outcome does not depend on scheduling.
absl::Status ParallelFor(int n, int jobs,
                         const std::function<absl::Status(int)>& fn);

}  // namespace tsmia

#endif  // TSMIA_PARALLEL_H_
