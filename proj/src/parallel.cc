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

#include "tsmia/parallel.h"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace tsmia {

absl::Status ParallelFor(int n, int jobs,
                         const std::function<absl::Status(int)>& fn) {
  std::vector<absl::Status> results(static_cast<size_t>(std::max(n, 0)));
  const int threads = std::clamp(jobs, 1, std::max(n, 1));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) {
      results[i] = fn(i);
      if (!results[i].ok()) return results[i];
    }
    return absl::OkStatus();
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&]() {
      for (int i = next++; i < n; i = next++) results[i] = fn(i);
    });
  }
  for (std::thread& t : pool) t.join();
  for (const absl::Status& s : results) {
    if (!s.ok()) return s;
  }
  return absl::OkStatus();
}

}  // namespace tsmia
