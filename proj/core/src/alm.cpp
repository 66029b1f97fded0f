#include "cssl/alm.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace cssl {

double AlmParams::epsilon(int k) const { return eps_scale / std::pow(k + 1.0, 2); }
double AlmParams::delta(int k) const { return delta_scale / std::pow(k + 1.0, 2); }
double AlmParams::delta_prime(int k) const { return delta_prime_scale / (k + 1.0); }

void AlmParams::validate() const {
  if (!(sigma0 > 0.0)) throw std::invalid_argument("AlmParams: sigma0 must be positive");
  if (!(rho >= 1.0)) throw std::invalid_argument("AlmParams: rho must be >= 1");
  if (!(sigma_max >= sigma0)) throw std::invalid_argument("AlmParams: sigma_max < sigma0");
  if (!(tol > 0.0)) throw std::invalid_argument("AlmParams: tol must be positive");
  if (max_outer <= 0) throw std::invalid_argument("AlmParams: max_outer must be positive");
  if (!(eps_scale >= 0.0) || !(delta_scale >= 0.0) || !(delta_prime_scale >= 0.0))
    throw std::invalid_argument("AlmParams: stopping sequences must be nonnegative");
  if (!(time_cap_seconds > 0.0)) throw std::invalid_argument("AlmParams: time cap must be positive");
}

bool check_inner_stop(const InnerStopInputs& in, const AlmParams& params,
                      InnerStopCriterion criterion) {
  switch (criterion) {
    case InnerStopCriterion::A:
      return in.grad_norm <=
             params.epsilon(in.k) / in.sigma * std::max(1.0, in.multiplier_norm);
    case InnerStopCriterion::B:
      return in.grad_norm <= params.delta(in.k) / in.sigma * in.multiplier_delta;
    case InnerStopCriterion::BPrime:
      return in.grad_norm <= params.delta_prime(in.k) / (2.0 * in.sigma) * in.multiplier_delta;
  }
  return false;
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::Converged: return "converged";
    case Termination::MaxIterations: return "max_iterations";
    case Termination::TimeLimit: return "time_limit";
    case Termination::InnerFailure: return "inner_failure";
  }
  return "unknown";
}

SolveResult alm_solve(const Problem& problem, const AlmParams& params,
                      const SsnParams& ssn_params, const PrimalDualPoint* warm,
                      const ProgressCallback& progress) {
  params.validate();
  ssn_params.validate();
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  SolveResult out;
  out.point = warm != nullptr ? *warm : PrimalDualPoint::zeros(problem);
  PrimalDualPoint& pt = out.point;
  SolveReport& rep = out.report;

  const double data_scale =
      1.0 + problem.b().norm() + problem.c_E().norm() + problem.c_I().norm();
  const double floor = params.inner_floor * params.tol * data_scale;

  SubproblemContext ctx;
  ctx.problem = &problem;
  double sigma = params.sigma0;
  Vector p = pt.stacked_dual();

  for (int k = 0; k < params.max_outer; ++k) {
    ctx.x = pt.x;
    ctx.y = pt.y;
    ctx.z = pt.z;
    ctx.sigma = sigma;
    const double mult_norm =
        std::sqrt(pt.x.squaredNorm() + pt.y.squaredNorm() + pt.z.squaredNorm());

    auto stop = [&](const InnerState& st) {
      const double g = st.grad_norm();
      if (g <= floor) return true;
      InnerStopInputs in;
      in.grad_norm = g;
      in.multiplier_norm = mult_norm;
      in.sigma = sigma;
      in.k = k;
      in.multiplier_delta = std::sqrt((st.next_x() - ctx.x).squaredNorm() +
                                      (st.next_y() - ctx.y).squaredNorm() +
                                      (st.next_z() - ctx.z).squaredNorm());
      bool ok = true;
      if (params.use_A) ok = ok && check_inner_stop(in, params, InnerStopCriterion::A);
      if (params.use_B) ok = ok && check_inner_stop(in, params, InnerStopCriterion::B);
      if (params.use_Bprime) ok = ok && check_inner_stop(in, params, InnerStopCriterion::BPrime);
      return ok;
    };

    SsnResult inner = ssn_minimize(ctx, p, ssn_params, stop);
    rep.newton_iterations += inner.report.newton_iterations;
    if (inner.report.status == SsnStatus::LineSearchFailed)
      rep.warnings.push_back("outer iteration " + std::to_string(k) +
                             ": inner line search failed");

    const InnerState& st = inner.state;
    p = st.point();
    pt.set_stacked_dual(problem, p);
    pt.w = std::move(inner.w);
    pt.s = std::move(inner.s);
    pt.x = st.next_x();
    pt.y = st.next_y();
    pt.z = st.next_z();

    IterationLog log;
    log.k = k;
    log.kkt = compute_kkt_residuals(pt, problem);
    log.sigma = sigma;
    log.newton_steps = inner.report.newton_iterations;
    rep.eta_history.push_back(log.kkt.eta);
    rep.sigma_history.push_back(sigma);
    rep.final = log.kkt;
    rep.outer_iterations = k + 1;
    if (progress) progress(log);

    if (!std::isfinite(log.kkt.eta)) {
      rep.reason = Termination::InnerFailure;
      break;
    }
    if (log.kkt.eta < params.tol) {
      rep.reason = Termination::Converged;
      break;
    }
    if (elapsed() > params.time_cap_seconds) {
      rep.reason = Termination::TimeLimit;
      break;
    }
    if (params.grow_when_newton_at_most < 0 ||
        inner.report.newton_iterations <= params.grow_when_newton_at_most)
      sigma = std::min(params.rho * sigma, params.sigma_max);
  }

  if (pt.y.norm() < 1e-10 * (1.0 + problem.b().norm()))
    rep.warnings.push_back("residual y is numerically zero; the Jacobian of prox_h degenerates");
  rep.nnz = count_nnz(pt.x);
  rep.seconds = elapsed();
  return out;
}

}  // namespace cssl
