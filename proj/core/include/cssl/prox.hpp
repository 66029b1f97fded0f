#pragma once

#include <vector>

#include "cssl/groups.hpp"
#include "cssl/linalg.hpp"

// Proximal mappings of h(y) = ||y||, of the sparse-group penalty
// p(x) = lambda1 * sum_j w_j ||x_Gj|| + lambda2 * ||x||_1, their conjugates,
// and of the nonnegative orthant, together with structured elements of their
// generalized Jacobians.
//
// Tie conventions (used identically everywhere):
//   ||u|| == sigma                      -> Jacobian of prox_h is 0
//   |u_i| == sigma * lambda2            -> theta_i = 0
//   ||v_Gj|| == sigma * lambda1 * w_j   -> group block is 0
//   u_i == 0 for the orthant            -> diagonal entry 0

namespace cssl {

/// prox of sigma*||.||: 0 inside the sigma-ball, (1 - sigma/||u||) u outside.
Vector prox_h(const Vector& u, double sigma);

struct ProxPResult {
  Vector result;
  Vector v;  // soft-threshold of u at sigma*lambda2
};

ProxPResult prox_p(const Vector& u, double sigma, const GroupPartition& groups,
                   const PenaltyParams& params);

/// prox of h*/sigma, i.e. the projection onto the unit l2 ball.
Vector prox_h_conjugate(const Vector& u, double sigma);

/// prox of p*/sigma via u - prox_p(sigma u, sigma) / sigma.
Vector prox_p_conjugate(const Vector& u, double sigma, const GroupPartition& groups,
                        const PenaltyParams& params);

Vector project_orthant(const Vector& u);

enum class BallCase { Inside, Boundary, Outside };

/// V1 = I - d Pi_{sigma ball}(u). Outside the ball
/// V1 = (1 - scale) I + scale * e e^T with scale = sigma/||u||, e = u/||u||;
/// otherwise V1 = 0.
struct ProxHJacobian {
  Index dim = 0;
  BallCase ball_case = BallCase::Inside;
  double scale = 0.0;
  Vector direction;

  bool outside() const { return ball_case == BallCase::Outside; }
  void apply_to(const Vector& d, Vector& out) const;
  Vector apply(const Vector& d) const;
};

ProxHJacobian jacobian_prox_h(const Vector& u, double sigma);

/// M = (I - P^T Sigma P) Theta kept in factored form. For a group outside its
/// ball the block is (1 - a_j) Theta_Gj + a_j vhat vhat^T with
/// a_j = sigma*lambda1*w_j / ||v_Gj||, vhat = v_Gj/||v_Gj||; otherwise it is 0.
struct ProxPJacobian {
  Vector theta;                    // 0/1 diagonal of Theta
  std::vector<BallCase> group_case;
  Vector group_scale;              // a_j, zero unless Outside
  Vector group_norm;               // ||v_Gj||
  Vector v;
  const GroupPartition* groups = nullptr;  // must outlive the Jacobian

  void apply_to(const Vector& d, Vector& out) const;
  Vector apply(const Vector& d) const;
};

ProxPJacobian jacobian_prox_p(const Vector& u, double sigma, const GroupPartition& groups,
                              const PenaltyParams& params);

/// 0/1 diagonal of the orthant projection Jacobian.
Vector jacobian_orthant(const Vector& u);

}  // namespace cssl
