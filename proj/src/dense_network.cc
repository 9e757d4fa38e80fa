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

#include "tsmia/dense_network.h"

#include <cmath>
#include <random>

#include "absl/strings/str_cat.h"
#include "tsmia/seeds.h"

namespace tsmia {

DenseNetwork::DenseNetwork(std::vector<int> layer_sizes)
    : layer_sizes_(std::move(layer_sizes)) {
  Eigen::Index total = 0;
  for (int l = 0; l + 1 < static_cast<int>(layer_sizes_.size()); ++l) {
    offsets_.push_back(total);
    total += static_cast<Eigen::Index>(layer_sizes_[l + 1]) *
                 (layer_sizes_[l] + 1);
  }
  parameters_ = Vector::Zero(total);
}

DenseNetwork DenseNetwork::Initialized(std::vector<int> layer_sizes,
                                       uint64_t seed) {
  DenseNetwork net(std::move(layer_sizes));
  Rng rng = MakeRng(seed, "dense-init");
  for (int l = 0; l < net.num_layers(); ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(
                                   net.layer_sizes_[l]));
    std::uniform_real_distribution<double> dist(-bound, bound);
    auto w = net.mutable_weights(l);
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      for (Eigen::Index i = 0; i < w.rows(); ++i) w(i, j) = dist(rng);
    }
    auto b = net.mutable_bias(l);
    for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = dist(rng);
  }
  return net;
}

absl::Status DenseNetwork::SetParameters(Vector parameters) {
  if (parameters.size() != parameters_.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("parameter vector has ", parameters.size(),
                     " entries, network expects ", parameters_.size()));
  }
  parameters_ = std::move(parameters);
  return absl::OkStatus();
}

Eigen::Map<const Matrix> DenseNetwork::weights(int layer) const {
  return {parameters_.data() + offset(layer), layer_sizes_[layer + 1],
          layer_sizes_[layer]};
}

Eigen::Map<const Vector> DenseNetwork::bias(int layer) const {
  const Eigen::Index w_size =
      static_cast<Eigen::Index>(layer_sizes_[layer + 1]) * layer_sizes_[layer];
  return {parameters_.data() + offset(layer) + w_size, layer_sizes_[layer + 1]};
}

Eigen::Map<Matrix> DenseNetwork::mutable_weights(int layer) {
  return {parameters_.data() + offset(layer), layer_sizes_[layer + 1],
          layer_sizes_[layer]};
}

Eigen::Map<Vector> DenseNetwork::mutable_bias(int layer) {
  const Eigen::Index w_size =
      static_cast<Eigen::Index>(layer_sizes_[layer + 1]) * layer_sizes_[layer];
  return {parameters_.data() + offset(layer) + w_size, layer_sizes_[layer + 1]};
}

Matrix DenseNetwork::Forward(const Matrix& inputs) const {
  Matrix a = inputs;
  for (int l = 0; l < num_layers(); ++l) {
    Matrix z = weights(l) * a;
    z.colwise() += bias(l);
    if (l + 1 < num_layers()) z = z.cwiseMax(0.0);
    a = std::move(z);
  }
  return a;
}

Matrix DenseNetwork::Forward(const Matrix& inputs, Cache* cache) const {
  cache->activations.clear();
  cache->activations.reserve(num_layers() + 1);
  cache->activations.push_back(inputs);
  for (int l = 0; l < num_layers(); ++l) {
    Matrix z = weights(l) * cache->activations.back();
    z.colwise() += bias(l);
    if (l + 1 < num_layers()) z = z.cwiseMax(0.0);
    cache->activations.push_back(std::move(z));
  }
  return cache->activations.back();
}

Vector DenseNetwork::Backward(const Cache& cache,
                              const Matrix& output_grad) const {
  Vector grad = Vector::Zero(parameters_.size());
  Matrix delta = output_grad;
  for (int l = num_layers() - 1; l >= 0; --l) {
    const Matrix& a_in = cache.activations[l];
    const Eigen::Index rows = layer_sizes_[l + 1];
    const Eigen::Index cols = layer_sizes_[l];
    Eigen::Map<Matrix>(grad.data() + offset(l), rows, cols).noalias() =
        delta * a_in.transpose();
    Eigen::Map<Vector>(grad.data() + offset(l) + rows * cols, rows) =
        delta.rowwise().sum();
    if (l > 0) {
      Matrix back = weights(l).transpose() * delta;
      // ReLU derivative; the subgradient at 0 is taken as 0.
      delta = (a_in.array() > 0.0).select(back, 0.0);
    }
  }
  return grad;
}

}  // namespace tsmia
