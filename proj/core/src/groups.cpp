#include "cssl/groups.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cssl {

Vector sqrt_size_weights(const std::vector<std::vector<Index>>& groups) {
  Vector w(static_cast<Index>(groups.size()));
  for (std::size_t j = 0; j < groups.size(); ++j)
    w[static_cast<Index>(j)] = std::sqrt(static_cast<double>(groups[j].size()));
  return w;
}

GroupPartition::GroupPartition(std::vector<std::vector<Index>> groups)
    : GroupPartition(groups, sqrt_size_weights(groups)) {}

GroupPartition::GroupPartition(std::vector<std::vector<Index>> groups, Vector weights)
    : groups_(std::move(groups)), weights_(std::move(weights)) {
  if (weights_.size() != static_cast<Index>(groups_.size()))
    throw std::invalid_argument("GroupPartition: one weight per group required");
  Index n = 0;
  for (const auto& g : groups_) n += static_cast<Index>(g.size());
  owner_.assign(static_cast<std::size_t>(n), -1);
  for (Index j = 0; j < size(); ++j) {
    if (!(weights_[j] > 0.0) || !std::isfinite(weights_[j]))
      throw std::invalid_argument("GroupPartition: weight of group " + std::to_string(j) +
                                  " must be positive");
    if (groups_[j].empty())
      throw std::invalid_argument("GroupPartition: group " + std::to_string(j) + " is empty");
    for (Index i : groups_[j]) {
      if (i < 0 || i >= n)
        throw std::invalid_argument("GroupPartition: index " + std::to_string(i) +
                                    " outside [0, " + std::to_string(n) + ")");
      if (owner_[i] != -1)
        throw std::invalid_argument("GroupPartition: index " + std::to_string(i) +
                                    " belongs to two groups");
      owner_[i] = j;
    }
  }
  dimension_ = n;
}

GroupPartition GroupPartition::contiguous(Index n, Index num_groups) {
  if (n <= 0 || num_groups <= 0 || num_groups > n)
    throw std::invalid_argument("GroupPartition::contiguous: need 0 < J <= n");
  const Index base = n / num_groups;
  std::vector<std::vector<Index>> groups(static_cast<std::size_t>(num_groups));
  Index next = 0;
  for (Index j = 0; j < num_groups; ++j) {
    const Index len = (j + 1 == num_groups) ? n - next : base;
    auto& g = groups[static_cast<std::size_t>(j)];
    g.reserve(static_cast<std::size_t>(len));
    for (Index k = 0; k < len; ++k) g.push_back(next++);
  }
  return GroupPartition(std::move(groups));
}

void PenaltyParams::validate() const {
  if (!(lambda1 >= 0.0) || !(lambda2 >= 0.0) || !std::isfinite(lambda1) ||
      !std::isfinite(lambda2))
    throw std::invalid_argument("PenaltyParams: lambda1, lambda2 must be finite and >= 0");
}

double penalty_value(const Vector& x, const GroupPartition& groups,
                     const PenaltyParams& params) {
  if (x.size() != groups.dimension()) throw DimensionError("penalty_value: size");
  double group_term = 0.0;
  for (Index j = 0; j < groups.size(); ++j) {
    double sq = 0.0;
    for (Index i : groups.group(j)) sq += x[i] * x[i];
    group_term += groups.weight(j) * std::sqrt(sq);
  }
  return params.lambda1 * group_term + params.lambda2 * x.lpNorm<1>();
}

}  // namespace cssl
