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

#ifndef TSMIA_ADAM_H_
#define TSMIA_ADAM_H_

#include <cstdint>

#include "tsmia/series.h"

namespace tsmia {

struct AdamOptions {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Adam with bias-corrected first and second moment estimates.
class Adam {
 public:
  Adam(Eigen::Index parameter_count, AdamOptions options);

  void Step(Vector& parameters, const Vector& gradient);
  int64_t steps() const { return steps_; }

 private:
  AdamOptions options_;
  Vector first_moment_;
  Vector second_moment_;
  int64_t steps_ = 0;
  double beta1_power_ = 1.0;
  double beta2_power_ = 1.0;
};

}  // namespace tsmia

#endif  // TSMIA_ADAM_H_
