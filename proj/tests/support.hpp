#pragma once

#include <algorithm>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "cssl/problem.hpp"
#include "oracle.hpp"

namespace testing_support {

inline cssl::Vector random_vector(std::mt19937_64& rng, cssl::Index n, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  cssl::Vector v(n);
  for (cssl::Index i = 0; i < n; ++i) v[i] = g(rng);
  return v;
}

inline cssl::Matrix random_matrix(std::mt19937_64& rng, cssl::Index r, cssl::Index c) {
  std::normal_distribution<double> g(0.0, 1.0);
  cssl::Matrix m(r, c);
  for (cssl::Index j = 0; j < c; ++j)
    for (cssl::Index i = 0; i < r; ++i) m(i, j) = g(rng);
  return m;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Random partition of {0..n-1} into J nonempty groups of shuffled indices.
inline cssl::GroupPartition random_groups(std::mt19937_64& rng, cssl::Index n, cssl::Index J) {
  std::vector<cssl::Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::size_t> cuts;
  std::vector<std::size_t> pool(static_cast<std::size_t>(n - 1));
  std::iota(pool.begin(), pool.end(), 1);
  std::shuffle(pool.begin(), pool.end(), rng);
  cuts.assign(pool.begin(), pool.begin() + (J - 1));
  std::sort(cuts.begin(), cuts.end());
  cuts.push_back(static_cast<std::size_t>(n));
  std::vector<std::vector<cssl::Index>> groups;
  std::size_t start = 0;
  for (std::size_t c : cuts) {
    groups.emplace_back(perm.begin() + static_cast<std::ptrdiff_t>(start),
                        perm.begin() + static_cast<std::ptrdiff_t>(c));
    start = c;
  }
  return cssl::GroupPartition(std::move(groups));
}

inline oracle::Groups oracle_groups(const cssl::GroupPartition& g) {
  oracle::Groups out;
  for (const auto& grp : g.groups()) out.emplace_back(grp.begin(), grp.end());
  return out;
}

inline oracle::DenseProblem dense(const cssl::Problem& p) {
  oracle::DenseProblem d;
  d.A = cssl::Matrix(p.A());
  d.BE = cssl::Matrix(p.B_E());
  d.BI = cssl::Matrix(p.B_I());
  d.b = p.b();
  d.cE = p.c_E();
  d.cI = p.c_I();
  d.groups = oracle_groups(p.groups());
  d.weights = p.groups().weights();
  d.lambda1 = p.penalty().lambda1;
  d.lambda2 = p.penalty().lambda2;
  return d;
}

inline oracle::AdmmIterate iterate_of(const cssl::PrimalDualPoint& pt, const cssl::Vector& vhat) {
  return {pt.u, pt.v_E, pt.v_I, vhat, pt.w, pt.s, pt.x, pt.y, pt.z};
}

/// Small dense random instance with feasible constraints (the right-hand
/// sides are generated from a random x0).
inline cssl::Problem random_problem(std::uint64_t seed, cssl::Index m, cssl::Index n,
                                    cssl::Index m_eq, cssl::Index m_ineq, cssl::Index J,
                                    double lambda1, double lambda2) {
  std::mt19937_64 rng(seed);
  const cssl::Matrix A = random_matrix(rng, m, n);
  const cssl::Matrix BE = random_matrix(rng, m_eq, n);
  const cssl::Matrix BI = random_matrix(rng, m_ineq, n);
  const cssl::Vector x0 = random_vector(rng, n, 0.3);
  cssl::Vector b = A * x0 + random_vector(rng, m, 0.5);
  cssl::Vector cE = BE * x0;
  cssl::Vector cI = BI * x0 - random_vector(rng, m_ineq).cwiseAbs();
  return cssl::Problem(cssl::sparse_from_dense(A), std::move(b), cssl::sparse_from_dense(BE),
                       std::move(cE), cssl::sparse_from_dense(BI), std::move(cI),
                       random_groups(rng, n, J), cssl::PenaltyParams{lambda1, lambda2},
                       "random-" + std::to_string(seed));
}

}  // namespace testing_support
