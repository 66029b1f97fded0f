#include "cssl/ssn.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cssl {

void SubproblemContext::validate() const {
  if (problem == nullptr) throw std::invalid_argument("SubproblemContext: no problem");
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw std::invalid_argument("SubproblemContext: sigma must be positive");
  if (x.size() != problem->n() || y.size() != problem->m() || z.size() != problem->m_ineq())
    throw DimensionError("SubproblemContext: multiplier sizes");
}

InnerState InnerState::evaluate(const SubproblemContext& ctx, Vector point) {
  if (point.size() != ctx.problem->m_hat()) throw DimensionError("InnerState: point size");
  Vector Ntp = ctx.problem->stacked().transpose() * point;
  return evaluate(ctx, std::move(point), std::move(Ntp));
}

InnerState InnerState::evaluate(const SubproblemContext& ctx, Vector point, Vector Ntp) {
  const Problem& pb = *ctx.problem;
  const double sigma = ctx.sigma;
  const Index m = pb.m();
  const Index m_E = pb.m_eq();
  const Index m_I = pb.m_ineq();

  InnerState st;
  st.point_ = std::move(point);
  st.Ntp_ = std::move(Ntp);

  st.h_arg_ = ctx.y + sigma * st.point_.head(m);
  st.prox_h_ = prox_h(st.h_arg_, sigma);
  st.p_arg_ = ctx.x - sigma * st.Ntp_;
  st.prox_p_ = prox_p(st.p_arg_, sigma, pb.groups(), pb.penalty());
  st.r_arg_ = sigma * st.point_.tail(m_I) - ctx.z;
  st.proj_r_ = project_orthant(st.r_arg_);

  const double half_inv = 0.5 / sigma;
  st.merit_ = half_inv * (st.prox_h_.squaredNorm() + st.prox_p_.result.squaredNorm() +
                          st.proj_r_.squaredNorm()) +
              pb.stacked_rhs().dot(st.point_);
  st.constant_ = -half_inv * (ctx.x.squaredNorm() + ctx.y.squaredNorm() + ctx.z.squaredNorm());

  st.grad_ = pb.stacked_rhs() - pb.stacked() * st.prox_p_.result;
  st.grad_.head(m) += st.prox_h_;
  st.grad_.segment(m + m_E, m_I) += st.proj_r_;
  st.grad_norm_ = st.grad_.norm();
  return st;
}

Vector InnerState::dual_w(const SubproblemContext& ctx) const {
  const Vector w = prox_h_conjugate(ctx.y / ctx.sigma + point_.head(ctx.problem->m()), ctx.sigma);
  assert(w.norm() <= 1.0 + 1e-12);
  return w;
}

Vector InnerState::dual_s(const SubproblemContext& ctx) const {
  const Problem& pb = *ctx.problem;
  return prox_p_conjugate(ctx.x / ctx.sigma - Ntp_, ctx.sigma, pb.groups(), pb.penalty());
}

NewtonSystem InnerState::newton_system(const SubproblemContext& ctx, double eps) const {
  const Problem& pb = *ctx.problem;
  const ProxHJacobian jh = jacobian_prox_h(h_arg_, ctx.sigma);
  const ProxPJacobian jp = jacobian_prox_p(p_arg_, ctx.sigma, pb.groups(), pb.penalty());
  const Vector jr = jacobian_orthant(r_arg_);
  const ActiveSets act = build_active_sets(jp.v, jp.theta, ctx.sigma, pb.groups(), pb.penalty());
  return assemble_system(jh, jp, jr, pb.stacked(), act, ctx.sigma, eps);
}

double eval_phi(const Vector& point, const SubproblemContext& ctx) {
  ctx.validate();
  return InnerState::evaluate(ctx, point).phi();
}

Vector eval_grad_phi(const Vector& point, const SubproblemContext& ctx) {
  ctx.validate();
  return InnerState::evaluate(ctx, point).grad();
}

void SsnParams::validate() const {
  auto open01 = [](double v) { return v > 0.0 && v < 1.0; };
  if (!(mu > 0.0 && mu < 0.5)) throw std::invalid_argument("SsnParams: mu must lie in (0, 1/2)");
  if (!open01(eta_bar)) throw std::invalid_argument("SsnParams: eta_bar must lie in (0, 1)");
  if (!(tau > 0.0 && tau <= 1.0)) throw std::invalid_argument("SsnParams: tau must lie in (0, 1]");
  if (!open01(nu1) || !open01(nu2))
    throw std::invalid_argument("SsnParams: nu1, nu2 must lie in (0, 1)");
  if (!open01(delta)) throw std::invalid_argument("SsnParams: delta must lie in (0, 1)");
  if (max_iterations < 0 || max_line_search < 0)
    throw std::invalid_argument("SsnParams: negative iteration cap");
}

SsnResult ssn_minimize(const SubproblemContext& ctx, const Vector& start,
                       const SsnParams& params, const InnerStopTest& stop) {
  ctx.validate();
  params.validate();
  const SparseMatrix& N = ctx.problem->stacked();

  SsnReport report;
  InnerState state = InnerState::evaluate(ctx, start);
  report.grad_norms.push_back(state.grad_norm());
  report.status = SsnStatus::MaxIterations;

  for (int j = 0;; ++j) {
    const double gnorm = state.grad_norm();
    if (!std::isfinite(gnorm)) throw NumericalError("ssn: non-finite gradient");
    if (gnorm == 0.0 || (stop && stop(state))) {
      report.status = SsnStatus::Converged;
      break;
    }
    if (j >= params.max_iterations) break;

    const double eps = params.nu1 * std::min(params.nu2, gnorm);
    const double eta = std::min(params.eta_bar, std::pow(gnorm, 1.0 + params.tau));
    const NewtonSystem sys = state.newton_system(ctx, eps);
    const Vector rhs = -state.grad();
    NewtonSolveResult sol = solve_newton(sys, rhs, params.strategy, eta);
    report.pcg_iterations += sol.pcg_iterations;

    Vector dir = std::move(sol.step);
    double slope = state.grad().dot(dir);
    if (!(slope < 0.0) || !all_finite(dir)) {
      // Only an inaccurate PCG solve can get here; fall back to steepest descent.
      dir = rhs;
      slope = -gnorm * gnorm;
    }
    const Vector Ntd = N.transpose() * dir;

    // Roundoff allowance: close to the minimizer phi changes below its ulp.
    const double slack = 8.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(state.merit()));
    double alpha = 1.0;
    bool accepted = false;
    InnerState trial;
    for (int ls = 0; ls <= params.max_line_search; ++ls) {
      trial = InnerState::evaluate(ctx, state.point() + alpha * dir, state.Ntp() + alpha * Ntd);
      ++report.line_search_steps;
      if (trial.merit() <= state.merit() + params.mu * alpha * slope + slack) {
        accepted = true;
        break;
      }
      if (ls < params.max_line_search) alpha *= params.delta;
    }
    if (!accepted && !(trial.merit() < state.merit())) {
      report.status = SsnStatus::LineSearchFailed;
      break;
    }

    report.steps.push_back({state.phi(), trial.phi(), alpha, slope});
    ++report.newton_iterations;
    state = std::move(trial);
    report.grad_norms.push_back(state.grad_norm());
  }

  SsnResult out{std::move(state), Vector(), Vector(), std::move(report)};
  out.w = out.state.dual_w(ctx);
  out.s = out.state.dual_s(ctx);
  return out;
}

}  // namespace cssl
