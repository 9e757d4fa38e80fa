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

#include "tsmia/adam.h"

namespace tsmia {

Adam::Adam(Eigen::Index parameter_count, AdamOptions options)
    : options_(options),
      first_moment_(Vector::Zero(parameter_count)),
      second_moment_(Vector::Zero(parameter_count)) {}

void Adam::Step(Vector& parameters, const Vector& gradient) {
  ++steps_;
  beta1_power_ *= options_.beta1;
  beta2_power_ *= options_.beta2;
  first_moment_ =
      options_.beta1 * first_moment_ + (1.0 - options_.beta1) * gradient;
  second_moment_ = options_.beta2 * second_moment_ +
                   (1.0 - options_.beta2) * gradient.cwiseAbs2();
  const double step_size = options_.learning_rate / (1.0 - beta1_power_);
  const double v_correction = 1.0 / (1.0 - beta2_power_);
  parameters.array() -=
      step_size * first_moment_.array() /
      ((second_moment_.array() * v_correction).sqrt() + options_.epsilon);
}

}  // namespace tsmia
