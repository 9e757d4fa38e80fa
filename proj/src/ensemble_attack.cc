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

#include "tsmia/ensemble_attack.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "absl/strings/str_cat.h"
#include "tsmia/roc.h"
#include "tsmia/seeds.h"

namespace tsmia {
namespace {

constexpr int kNewtonIterations = 25;

double Sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Best training-accuracy threshold for one feature; ties keep the first.
void FitStump(const Vector& x, const std::vector<int>& labels,
              double* threshold, double* direction) {
  std::vector<double> values(x.begin(), x.end());
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  std::vector<double> candidates;
  candidates.push_back(values.front() - 1.0);
  for (size_t i = 1; i < values.size(); ++i) {
    candidates.push_back(0.5 * (values[i - 1] + values[i]));
  }
  const int members = std::accumulate(labels.begin(), labels.end(), 0);
  const int n = static_cast<int>(x.size());
  int best = -1;
  for (double t : candidates) {
    int below_members = 0;
    int below_total = 0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (x(i) <= t) {
        ++below_total;
        below_members += labels[i];
      }
    }
    // Correct predictions when members are below, and when they are above.
    const int correct_below =
        below_members + (n - below_total) - (members - below_members);
    const int correct_above = n - correct_below;
    if (correct_below > best) {
      best = correct_below;
      *threshold = t;
      *direction = 1.0;
    }
    if (correct_above > best) {
      best = correct_above;
      *threshold = t;
      *direction = -1.0;
    }
  }
}

}  // namespace

absl::Status ValidateEnsembleConfig(const EnsembleConfig& cfg) {
  if (cfg.executions < 1 || cfg.repetitions < 1 || cfg.combinations < 1 ||
      cfg.subset_size < 4) {
    return absl::InvalidArgumentError(
        "ensemble executions, repetitions and combinations must be >= 1 and "
        "the subset size >= 4");
  }
  if (!(cfg.holdout_fraction > 0.0 && cfg.holdout_fraction < 1.0)) {
    return absl::InvalidArgumentError("holdout fraction must be in (0, 1)");
  }
  if (!(cfg.l2 > 0.0)) return absl::InvalidArgumentError("l2 must be > 0");
  return absl::OkStatus();
}

absl::StatusOr<StumpLogisticClassifier> StumpLogisticClassifier::Fit(
    const Matrix& features, const std::vector<int>& labels, double l2) {
  const Eigen::Index n = features.rows();
  const Eigen::Index f = features.cols();
  if (n != static_cast<Eigen::Index>(labels.size()) || n == 0 || f == 0) {
    return absl::InvalidArgumentError("bad classifier training data");
  }
  const int members = std::accumulate(labels.begin(), labels.end(), 0);
  if (members == 0 || members == n) {
    return absl::InvalidArgumentError("classifier needs both classes");
  }
  StumpLogisticClassifier c;
  c.thresholds_.resize(f);
  c.directions_.resize(f);
  for (Eigen::Index j = 0; j < f; ++j) {
    FitStump(features.col(j), labels, &c.thresholds_(j), &c.directions_(j));
  }

  // Newton's method on the penalized log-loss; the bias is not penalized.
  Matrix design(n, f + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    design.row(i).head(f) = c.Indicators(features.row(i)).transpose();
    design(i, f) = 1.0;
  }
  Vector y(n);
  for (Eigen::Index i = 0; i < n; ++i) y(i) = labels[i];
  Vector theta = Vector::Zero(f + 1);
  Vector penalty = Vector::Constant(f + 1, l2);
  penalty(f) = 1e-8;
  for (int it = 0; it < kNewtonIterations; ++it) {
    const Vector p = (design * theta).unaryExpr(&Sigmoid);
    const Vector grad =
        design.transpose() * (p - y) + penalty.cwiseProduct(theta);
    const Vector w = p.cwiseProduct(Vector::Ones(n) - p);
    Matrix hessian = design.transpose() * w.asDiagonal() * design;
    hessian.diagonal() += penalty;
    theta -= hessian.ldlt().solve(grad);
  }
  if (!theta.allFinite()) {
    return absl::InternalError("logistic combiner diverged");
  }
  c.weights_ = theta.head(f);
  c.bias_ = theta(f);
  return c;
}

Vector StumpLogisticClassifier::Indicators(const Eigen::RowVectorXd& x) const {
  Vector out(x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    out(j) = directions_(j) * (x(j) - thresholds_(j)) <= 0.0 ? 1.0 : 0.0;
  }
  return out;
}

double StumpLogisticClassifier::Probability(const Eigen::RowVectorXd& x) const {
  return Sigmoid(weights_.dot(Indicators(x)) + bias_);
}

Vector StumpLogisticClassifier::Probabilities(const Matrix& features) const {
  Vector out(features.rows());
  for (Eigen::Index i = 0; i < features.rows(); ++i) {
    out(i) = Probability(features.row(i));
  }
  return out;
}

absl::StatusOr<std::vector<double>> EnsembleAttackScores(
    const Matrix& members, const Matrix& nonmembers, const Matrix& audit,
    const EnsembleConfig& cfg, uint64_t seed) {
  if (absl::Status s = ValidateEnsembleConfig(cfg); !s.ok()) return s;
  if (members.cols() != nonmembers.cols() || members.cols() != audit.cols() ||
      members.cols() == 0) {
    return absl::InvalidArgumentError("feature dimensions differ");
  }
  const int member_share = cfg.subset_size / 2;
  const int nonmember_share = cfg.subset_size - member_share;
  if (members.rows() < member_share * cfg.combinations ||
      nonmembers.rows() < nonmember_share * cfg.combinations) {
    return absl::FailedPreconditionError(absl::StrCat(
        "ensemble attack needs ", member_share * cfg.combinations,
        " members and ", nonmember_share * cfg.combinations,
        " non-members; have ", members.rows(), " and ", nonmembers.rows()));
  }

  Vector votes = Vector::Zero(audit.rows());
  int kept = 0;
  for (int e = 0; e < cfg.executions; ++e) {
    Rng rng = MakeRng(seed, "ensemble-execution", e);
    std::vector<Eigen::Index> m_order(members.rows());
    std::vector<Eigen::Index> n_order(nonmembers.rows());
    std::iota(m_order.begin(), m_order.end(), Eigen::Index{0});
    std::iota(n_order.begin(), n_order.end(), Eigen::Index{0});
    std::shuffle(m_order.begin(), m_order.end(), rng);
    std::shuffle(n_order.begin(), n_order.end(), rng);

    for (int c = 0; c < cfg.combinations; ++c) {
      Matrix subset(cfg.subset_size, members.cols());
      std::vector<int> labels(cfg.subset_size);
      for (int i = 0; i < member_share; ++i) {
        subset.row(i) = members.row(m_order[c * member_share + i]);
        labels[i] = 1;
      }
      for (int i = 0; i < nonmember_share; ++i) {
        subset.row(member_share + i) =
            nonmembers.row(n_order[c * nonmember_share + i]);
        labels[member_share + i] = 0;
      }

      std::optional<StumpLogisticClassifier> best;
      double best_auc = -1.0;
      for (int rep = 0; rep < cfg.repetitions; ++rep) {
        Rng split_rng = MakeRng(
            seed, "ensemble-candidate",
            (static_cast<uint64_t>(e) * cfg.combinations + c) * cfg.repetitions +
                rep);
        // Stratified split: the first `h` of each shuffled class are held out.
        std::vector<int> train_idx, hold_idx;
        for (int label : {1, 0}) {
          std::vector<int> cls;
          for (int i = 0; i < cfg.subset_size; ++i) {
            if (labels[i] == label) cls.push_back(i);
          }
          std::shuffle(cls.begin(), cls.end(), split_rng);
          const int h = std::clamp(
              static_cast<int>(std::lround(cfg.holdout_fraction * cls.size())),
              1, static_cast<int>(cls.size()) - 1);
          hold_idx.insert(hold_idx.end(), cls.begin(), cls.begin() + h);
          train_idx.insert(train_idx.end(), cls.begin() + h, cls.end());
        }
        std::vector<int> train_labels, hold_labels;
        for (int i : train_idx) train_labels.push_back(labels[i]);
        for (int i : hold_idx) hold_labels.push_back(labels[i]);
        absl::StatusOr<StumpLogisticClassifier> candidate =
            StumpLogisticClassifier::Fit(subset(train_idx, Eigen::all),
                                         train_labels, cfg.l2);
        if (!candidate.ok()) return candidate.status();
        const Vector p = candidate->Probabilities(subset(hold_idx, Eigen::all));
        absl::StatusOr<double> auc = AucFromScores(
            std::vector<double>(p.begin(), p.end()), hold_labels);
        if (!auc.ok()) return auc.status();
        if (*auc > best_auc) {
          best_auc = *auc;
          best = *std::move(candidate);
        }
      }
      const Vector p = best->Probabilities(audit);
      votes += (p.array() >= 0.5).cast<double>().matrix();
      ++kept;
    }
  }
  votes /= static_cast<double>(kept);
  return std::vector<double>(votes.begin(), votes.end());
}

}  // namespace tsmia
