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

#ifndef TSMIA_DENSE_NETWORK_H_
#define TSMIA_DENSE_NETWORK_H_

#include <cstdint>
#include <vector>

#include "Eigen/Dense"
#include "absl/status/status.h"
#include "tsmia/series.h"

namespace tsmia {

// Fully connected feedforward network with ReLU hidden layers and a linear
// output layer. Samples are columns: Forward maps (input_size x batch) to
// (output_size x batch).
//
// Parameters live in one flat vector. For each layer l the weight matrix
// (out x in, column-major) is followed by the bias vector (out).
class DenseNetwork {
 public:
  DenseNetwork() = default;

  // All parameters zero. `layer_sizes` = {input, hidden..., output}.
  explicit DenseNetwork(std::vector<int> layer_sizes);

  // Weights and biases drawn from U(-1/sqrt(fan_in), 1/sqrt(fan_in)).
  static DenseNetwork Initialized(std::vector<int> layer_sizes, uint64_t seed);

  const std::vector<int>& layer_sizes() const { return layer_sizes_; }
  int input_size() const { return layer_sizes_.front(); }
  int output_size() const { return layer_sizes_.back(); }
  int num_layers() const { return static_cast<int>(layer_sizes_.size()) - 1; }
  Eigen::Index parameter_count() const { return parameters_.size(); }

  const Vector& parameters() const { return parameters_; }
  Vector& mutable_parameters() { return parameters_; }
  absl::Status SetParameters(Vector parameters);

  Eigen::Map<const Matrix> weights(int layer) const;
  Eigen::Map<const Vector> bias(int layer) const;
  Eigen::Map<Matrix> mutable_weights(int layer);
  Eigen::Map<Vector> mutable_bias(int layer);

  // Activations of every layer (index 0 is the input); the last entry is the
  // network output.
  struct Cache {
    std::vector<Matrix> activations;
  };

  Matrix Forward(const Matrix& inputs) const;
  Matrix Forward(const Matrix& inputs, Cache* cache) const;

  // Gradient of a loss with respect to all parameters, given the gradient of
  // that loss with respect to the network output (output_size x batch).
  Vector Backward(const Cache& cache, const Matrix& output_grad) const;

 private:
  Eigen::Index offset(int layer) const { return offsets_[layer]; }

  std::vector<int> layer_sizes_;
  std::vector<Eigen::Index> offsets_;
  Vector parameters_;
};

}  // namespace tsmia

#endif  // TSMIA_DENSE_NETWORK_H_
