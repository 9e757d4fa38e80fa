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

#ifndef TSMIA_SEEDS_H_
#define TSMIA_SEEDS_H_

#include <cstdint>
#include <random>
#include "absl/strings/string_view.h"

namespace tsmia {

// Every random stream in an experiment is derived from one 64-bit seed:
//
//   stream_seed = splitmix64(seed ^ splitmix64(fnv1a64(purpose) + index))
//
// so that e.g. changing the number of shadow models never perturbs the
// stream used to train the target model.
uint64_t SplitMix64(uint64_t x);
uint64_t Fnv1a64(absl::string_view bytes);
uint64_t DeriveSeed(uint64_t seed, absl::string_view purpose, uint64_t index = 0);

using Rng = std::mt19937_64;

inline Rng MakeRng(uint64_t seed, absl::string_view purpose,
                   uint64_t index = 0) {
  return Rng(DeriveSeed(seed, purpose, index));
}

}  // namespace tsmia

#endif  // TSMIA_SEEDS_H_
