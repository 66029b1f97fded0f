#pragma once

#include <limits>
#include <optional>

#include "cssl/alm.hpp"
#include "cssl/problem.hpp"

namespace cssl {

struct AdmmParams {
  double sigma = 1.0;
  double tau = 1.618;        // dual step, (0, (1 + sqrt 5)/2)
  double tau_tilde = 1.0;    // proximal weight on v_E
  int max_iterations = 10000;
  double tol = 1e-6;
  int kkt_every = 10;
  double time_cap_seconds = std::numeric_limits<double>::infinity();

  void validate() const;
};

/// Cached solver for M = N N^T + blockdiag(I, tau_tilde/sigma^2 I, I).
/// Dense Cholesky up to m_hat = 4000, PCG with the exact diagonal above that.
class AdmmFactorization {
 public:
  AdmmFactorization(const Problem& problem, const AdmmParams& params);

  Index dim() const { return dim_; }
  bool dense() const { return dense_; }
  Vector solve(const Vector& rhs) const;
  /// M d computed from N without the factorization.
  Vector apply(const Vector& d) const;

  /// Number of factorizations built in this process.
  static long constructions();

 private:
  const Problem* problem_;
  Index dim_;
  bool dense_;
  Vector shift_;  // diagonal added to N N^T
  std::optional<CholeskyFactor> chol_;
  Vector precond_;
};

/// Iterate of the semi-proximal ADMM; v_hat is the copy of v_I kept in R_-.
struct AdmmState {
  Vector u, v_E, v_I, v_hat, w, s, x, y, z;

  static AdmmState zeros(const Problem& problem);
  static AdmmState from_point(const PrimalDualPoint& pt);
  PrimalDualPoint point() const;
};

/// One full iteration (block solve, closed-form updates, multiplier step).
void admm_iterate(const Problem& problem, const AdmmFactorization& factor,
                  const AdmmParams& params, AdmmState& state);

SolveResult admm_solve(const Problem& problem, const AdmmParams& params,
                       const PrimalDualPoint* warm = nullptr,
                       const ProgressCallback& progress = {});

}  // namespace cssl
