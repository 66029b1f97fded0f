#pragma once

#include <vector>

#include "cssl/linalg.hpp"

namespace cssl {

/// Disjoint index groups G_1..G_J covering {0, ..., n-1} with positive weights.
class GroupPartition {
 public:
  GroupPartition() = default;

  // Throws std::invalid_argument unless the groups partition {0..n-1} and
  // every weight is positive.
  GroupPartition(std::vector<std::vector<Index>> groups, Vector weights);

  // Weights default to sqrt(|G_j|).
  explicit GroupPartition(std::vector<std::vector<Index>> groups);

  /// J groups of floor(n/J) consecutive indices; the last group absorbs the
  /// remainder.
  static GroupPartition contiguous(Index n, Index num_groups);

  Index dimension() const { return dimension_; }
  Index size() const { return static_cast<Index>(groups_.size()); }
  const std::vector<Index>& group(Index j) const { return groups_[j]; }
  const std::vector<std::vector<Index>>& groups() const { return groups_; }
  double weight(Index j) const { return weights_[j]; }
  const Vector& weights() const { return weights_; }
  Index group_of(Index i) const { return owner_[i]; }

 private:
  std::vector<std::vector<Index>> groups_;
  Vector weights_;
  std::vector<Index> owner_;
  Index dimension_ = 0;
};

Vector sqrt_size_weights(const std::vector<std::vector<Index>>& groups);

/// Regularization weights of lambda1 * sum_j w_j ||x_Gj|| + lambda2 * ||x||_1.
struct PenaltyParams {
  double lambda1 = 0.0;
  double lambda2 = 0.0;

  void validate() const;
};

/// Ball radius of group j in the group-norm term: lambda1 * w_j.
inline double group_threshold(const PenaltyParams& params, const GroupPartition& groups,
                              Index j) {
  return params.lambda1 * groups.weight(j);
}

double penalty_value(const Vector& x, const GroupPartition& groups,
                     const PenaltyParams& params);

}  // namespace cssl
