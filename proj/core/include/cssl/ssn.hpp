#pragma once

#include <functional>
#include <vector>

#include "cssl/newton_system.hpp"
#include "cssl/problem.hpp"
#include "cssl/prox.hpp"

namespace cssl {

/// Fixed data (x, y, z, sigma) of one augmented Lagrangian subproblem.
struct SubproblemContext {
  const Problem* problem = nullptr;
  Vector x, y, z;
  double sigma = 1.0;

  void validate() const;
};

/// Everything derived from one dual iterate p = (u, v_E, v_I): the prox
/// evaluations, phi and its gradient. Built in one shot so the caches always
/// describe the same point.
class InnerState {
 public:
  static InnerState evaluate(const SubproblemContext& ctx, Vector point);
  // Ntp must equal N^T point; lets line searches reuse N^T along a ray.
  static InnerState evaluate(const SubproblemContext& ctx, Vector point, Vector Ntp);

  const Vector& point() const { return point_; }
  const Vector& Ntp() const { return Ntp_; }
  /// Value of phi as displayed, including the constant -(|x|^2+|y|^2+|z|^2)/(2 sigma).
  double phi() const { return merit_ + constant_; }
  /// phi without its constant term; what the line search compares.
  double merit() const { return merit_; }
  const Vector& grad() const { return grad_; }
  double grad_norm() const { return grad_norm_; }

  /// Multipliers the outer update would produce from this point:
  /// x+ = Prox_{sigma p}(x - sigma N^T p), y+ = Prox_{sigma h}(y + sigma u),
  /// z+ = -Pi_{R+}(sigma v_I - z).
  const Vector& next_x() const { return prox_p_.result; }
  const Vector& next_y() const { return prox_h_; }
  Vector next_z() const { return -proj_r_; }

  /// w = Prox_{h*/sigma}(y/sigma + u).
  Vector dual_w(const SubproblemContext& ctx) const;
  /// s = Prox_{p*/sigma}(x/sigma - N^T p).
  Vector dual_s(const SubproblemContext& ctx) const;

  /// H + eps I at this point with the tie conventions of prox.hpp.
  NewtonSystem newton_system(const SubproblemContext& ctx, double eps) const;

 private:
  Vector point_;
  Vector Ntp_;
  Vector h_arg_;   // y + sigma u
  Vector prox_h_;
  Vector p_arg_;   // x - sigma N^T p
  ProxPResult prox_p_;
  Vector r_arg_;   // sigma v_I - z
  Vector proj_r_;
  double merit_ = 0.0;
  double constant_ = 0.0;
  Vector grad_;
  double grad_norm_ = 0.0;
};

double eval_phi(const Vector& point, const SubproblemContext& ctx);
Vector eval_grad_phi(const Vector& point, const SubproblemContext& ctx);

struct SsnParams {
  double mu = 1e-4;       // Armijo constant, (0, 1/2)
  double eta_bar = 0.1;   // CG tolerance cap, (0, 1)
  double tau = 0.2;       // CG tolerance exponent, (0, 1]
  double nu1 = 1e-3;      // ridge eps_j = nu1 * min(nu2, ||grad||)
  double nu2 = 0.5;
  double delta = 0.5;     // backtracking factor, (0, 1)
  int max_iterations = 50;
  int max_line_search = 50;
  NewtonStrategy strategy = NewtonStrategy::Auto;

  void validate() const;
};

enum class SsnStatus { Converged, MaxIterations, LineSearchFailed };

struct ArmijoRecord {
  double phi_before = 0.0;
  double phi_after = 0.0;
  double step = 0.0;
  double slope = 0.0;  // <grad, direction>
};

struct SsnReport {
  SsnStatus status = SsnStatus::Converged;
  int newton_iterations = 0;
  int line_search_steps = 0;
  int pcg_iterations = 0;
  std::vector<double> grad_norms;  // one entry per visited iterate
  std::vector<ArmijoRecord> steps;
};

struct SsnResult {
  InnerState state;
  Vector w;
  Vector s;
  SsnReport report;
};

/// Returns true when the inner solve may stop at the given iterate.
using InnerStopTest = std::function<bool(const InnerState&)>;

/// Semismooth Newton with Armijo backtracking on phi for fixed (x, y, z,
/// sigma), started from `start`. The stop test is consulted before every
/// Newton step, so a start that already passes takes no step.
SsnResult ssn_minimize(const SubproblemContext& ctx, const Vector& start,
                       const SsnParams& params, const InnerStopTest& stop);

}  // namespace cssl
