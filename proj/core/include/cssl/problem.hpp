#pragma once

#include <string>

#include "cssl/groups.hpp"
#include "cssl/linalg.hpp"

namespace cssl {

/// One instance of
///   min ||A x - b|| + lambda1 sum_j w_j ||x_Gj|| + lambda2 ||x||_1
///   s.t. B_E x = c_E,  B_I x >= c_I.
/// Either constraint block may have zero rows.
class Problem {
 public:
  Problem(SparseMatrix A, Vector b, SparseMatrix B_E, Vector c_E, SparseMatrix B_I,
          Vector c_I, GroupPartition groups, PenaltyParams penalty, std::string name = {});

  /// Square-root sparse-group Lasso without linear constraints.
  static Problem unconstrained(SparseMatrix A, Vector b, GroupPartition groups,
                               PenaltyParams penalty, std::string name = {});

  Problem with_penalty(const PenaltyParams& penalty) const;

  Index m() const { return A_.rows(); }
  Index n() const { return A_.cols(); }
  Index m_eq() const { return B_E_.rows(); }
  Index m_ineq() const { return B_I_.rows(); }
  /// m + m_E + m_I, the size of the dual block (u, v_E, v_I).
  Index m_hat() const { return stacked_.rows(); }

  const SparseMatrix& A() const { return A_; }
  const Vector& b() const { return b_; }
  const SparseMatrix& B_E() const { return B_E_; }
  const Vector& c_E() const { return c_E_; }
  const SparseMatrix& B_I() const { return B_I_; }
  const Vector& c_I() const { return c_I_; }
  const GroupPartition& groups() const { return groups_; }
  const PenaltyParams& penalty() const { return penalty_; }
  const std::string& name() const { return name_; }

  /// N = [A; B_E; B_I].
  const SparseMatrix& stacked() const { return stacked_; }
  /// (b; c_E; c_I).
  const Vector& stacked_rhs() const { return stacked_rhs_; }

 private:
  SparseMatrix A_;
  Vector b_;
  SparseMatrix B_E_;
  Vector c_E_;
  SparseMatrix B_I_;
  Vector c_I_;
  GroupPartition groups_;
  PenaltyParams penalty_;
  std::string name_;
  SparseMatrix stacked_;
  Vector stacked_rhs_;
};

/// Full variable set of the optimality system: primal (x, y, z) and dual
/// (u, v_E, v_I, w, s).
struct PrimalDualPoint {
  Vector x, y, z;
  Vector u, v_E, v_I, w, s;

  static PrimalDualPoint zeros(const Problem& problem);

  /// (u; v_E; v_I) as one vector of length m_hat.
  Vector stacked_dual() const;
  void set_stacked_dual(const Problem& problem, const Vector& p);
};

}  // namespace cssl
