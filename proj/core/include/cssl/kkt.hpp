#pragma once

#include "cssl/problem.hpp"

namespace cssl {

/// Relative residuals of the optimality system, gap, and objective values.
struct KktResiduals {
  double primal = 0.0;         // R_P
  double dual = 0.0;           // R_D
  double complementarity = 0.0;  // R_C
  double gap = 0.0;            // R_G
  double eta = 0.0;            // max(R_P, R_D, R_C)
  double pobj = 0.0;
  double dobj = 0.0;
};

/// ||A x - b|| + lambda1 sum_j w_j ||x_Gj|| + lambda2 ||x||_1.
double primal_objective(const Problem& problem, const Vector& x);

/// -(<b,u> + <c_E,v_E> + <c_I,v_I>); the conjugate indicator terms vanish at
/// the prox-feasible (w, s) every solver produces.
double dual_objective(const Problem& problem, const PrimalDualPoint& point);

/// R_C uses the unit-parameter maps Prox_{h*}, Prox_{p*} and Pi_{R-}.
KktResiduals compute_kkt_residuals(const PrimalDualPoint& point, const Problem& problem);

/// Smallest k whose k largest |x_i| sum to at least 0.9999 ||x||_1.
Index count_nnz(const Vector& x);

}  // namespace cssl
