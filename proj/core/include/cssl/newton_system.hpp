#pragma once

#include <vector>

#include "cssl/linalg.hpp"
#include "cssl/prox.hpp"

namespace cssl {

/// Index sets driving the low-rank structure of N V2 N^T:
/// xi[j] = {i in G_j : theta_i = 1}, outside = {j : ||v_Gj|| > sigma*lambda1*w_j}.
struct ActiveSets {
  std::vector<std::vector<Index>> xi;
  std::vector<Index> outside;
  Index r = 0;   // sum of |xi[j]| over outside groups
  Index r2 = 0;  // |outside|
};

ActiveSets build_active_sets(const Vector& v, const Vector& theta, double sigma,
                             const GroupPartition& groups, const PenaltyParams& params);

/// Regularized generalized Hessian
///   H + eps I = sigma * (blockdiag(V1, 0, V3) + D D^T) + eps I
/// stored as a diagonal plus a thin dense factor. D = [B C] has r + r2
/// columns; the rank-one part of V1 (outside the ball) is kept as one more
/// column so that every solve path treats the system as diagonal + low rank.
class NewtonSystem final : public LinearOperator {
 public:
  NewtonSystem(Vector diagonal, Matrix low_rank, Vector v1_column, double sigma, double ridge);

  Index rows() const override { return diagonal_.size(); }
  Index cols() const override { return diagonal_.size(); }
  void apply_to(const Vector& in, Vector& out) const override;
  void apply_adjoint_to(const Vector& in, Vector& out) const override { apply_to(in, out); }

  /// H d, i.e. without the ridge term.
  Vector apply_unregularized(const Vector& d) const;

  /// Exact diagonal of H + eps I.
  Vector preconditioner() const;

  /// Width of D, r + r2.
  Index width() const { return low_rank_.cols(); }
  const Matrix& low_rank() const { return low_rank_; }
  bool has_v1_column() const { return v1_column_.size() != 0; }
  const Vector& v1_column() const { return v1_column_; }
  /// Diagonal part including the ridge.
  const Vector& diagonal() const { return diagonal_; }
  double sigma() const { return sigma_; }
  double ridge() const { return ridge_; }

  /// [D, v1 column] : every low-rank column scaled by sigma in the system.
  Matrix factor() const;

 private:
  Vector diagonal_;
  Matrix low_rank_;
  Vector v1_column_;
  double sigma_;
  double ridge_;
};

/// Builds the structured system from the three Jacobian elements. jac_orthant
/// has length m_I; the v_E block sits between the u and v_I blocks of N.
NewtonSystem assemble_system(const ProxHJacobian& jac_h, const ProxPJacobian& jac_p,
                             const Vector& jac_orthant, const SparseMatrix& N,
                             const ActiveSets& active, double sigma, double eps);

enum class NewtonStrategy { Auto, Direct, Pcg };

struct NewtonSolveResult {
  Vector step;
  double residual = 0.0;  // ||H step - rhs||, ridge excluded
  NewtonStrategy used = NewtonStrategy::Direct;
  int pcg_iterations = 0;
  bool converged = true;
};

/// Solves (H + eps I) step = rhs. The direct path factors either the
/// (r + r2 + 1)-dimensional Woodbury core or, when that is not smaller, the
/// m_hat-dimensional system; a failed factorization falls back to PCG. The
/// PCG path stops once ||H step - rhs|| <= pcg_tol or after min(m_hat, 500)
/// iterations.
NewtonSolveResult solve_newton(const NewtonSystem& system, const Vector& rhs,
                               NewtonStrategy strategy, double pcg_tol);

}  // namespace cssl
