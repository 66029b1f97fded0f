#include "cssl/admm.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "cssl/prox.hpp"

namespace cssl {
namespace {

std::atomic<long> g_factorizations{0};
constexpr Index kDenseLimit = 4000;

}  // namespace

void AdmmParams::validate() const {
  const double golden = 0.5 * (1.0 + std::sqrt(5.0));
  if (!(sigma > 0.0)) throw std::invalid_argument("AdmmParams: sigma must be positive");
  if (!(tau > 0.0 && tau < golden))
    throw std::invalid_argument("AdmmParams: tau must lie in (0, (1+sqrt5)/2)");
  if (!(tau_tilde >= 0.0)) throw std::invalid_argument("AdmmParams: tau_tilde must be >= 0");
  if (max_iterations <= 0) throw std::invalid_argument("AdmmParams: max_iterations must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("AdmmParams: tol must be positive");
  if (kkt_every <= 0) throw std::invalid_argument("AdmmParams: kkt_every must be positive");
}

AdmmFactorization::AdmmFactorization(const Problem& problem, const AdmmParams& params)
    : problem_(&problem), dim_(problem.m_hat()), dense_(problem.m_hat() <= kDenseLimit) {
  params.validate();
  shift_ = Vector::Ones(dim_);
  shift_.segment(problem.m(), problem.m_eq()).setConstant(params.tau_tilde /
                                                          (params.sigma * params.sigma));
  const SparseMatrix& N = problem.stacked();
  if (dense_) {
    const Matrix Nd = Matrix(N);
    Matrix M = Nd * Nd.transpose();
    M.diagonal() += shift_;
    chol_.emplace(M);  // throws NumericalError if M is not positive definite
  } else {
    // diag(N N^T) = squared row norms of N.
    precond_ = shift_;
    for (Index j = 0; j < N.outerSize(); ++j)
      for (SparseMatrix::InnerIterator it(N, j); it; ++it)
        precond_[it.row()] += it.value() * it.value();
    if (!(precond_.array() > 0.0).all())
      throw NumericalError("admm: M is singular; increase tau_tilde");
  }
  ++g_factorizations;
}

long AdmmFactorization::constructions() { return g_factorizations.load(); }

Vector AdmmFactorization::apply(const Vector& d) const {
  if (d.size() != dim_) throw DimensionError("AdmmFactorization: size");
  const SparseMatrix& N = problem_->stacked();
  const Vector t = N.transpose() * d;
  return N * t + shift_.cwiseProduct(d);
}

Vector AdmmFactorization::solve(const Vector& rhs) const {
  if (dense_) return chol_->solve(rhs);
  const SymmetricOperator op(dim_, [this](const Vector& in, Vector& out) { out = apply(in); });
  PcgOptions opts;
  opts.max_iterations = 1000;
  opts.tolerance = 1e-11;
  opts.preconditioner = precond_;
  return pcg_solve(op, rhs, opts).solution;
}

AdmmState AdmmState::zeros(const Problem& problem) {
  return from_point(PrimalDualPoint::zeros(problem));
}

AdmmState AdmmState::from_point(const PrimalDualPoint& pt) {
  AdmmState st;
  st.u = pt.u;
  st.v_E = pt.v_E;
  st.v_I = pt.v_I;
  st.v_hat = pt.v_I.cwiseMin(0.0);
  st.w = pt.w;
  st.s = pt.s;
  st.x = pt.x;
  st.y = pt.y;
  st.z = pt.z;
  return st;
}

PrimalDualPoint AdmmState::point() const {
  PrimalDualPoint pt;
  pt.x = x;
  pt.y = y;
  pt.z = z;
  pt.u = u;
  pt.v_E = v_E;
  pt.v_I = v_I;
  pt.w = w;
  pt.s = s;
  return pt;
}

void admm_iterate(const Problem& pb, const AdmmFactorization& factor, const AdmmParams& params,
                  AdmmState& st) {
  const double sigma = params.sigma;
  const double inv = 1.0 / sigma;
  const Index m = pb.m();
  const Index m_E = pb.m_eq();
  const Index m_I = pb.m_ineq();
  const SparseMatrix& N = pb.stacked();

  // rhs = -N (s - x/sigma) + (w - y/sigma; tau_tilde/sigma^2 v_E; v_hat + z/sigma)
  //       - (b; c_E; c_I)/sigma
  Vector rhs = -(N * (st.s - inv * st.x));
  rhs.head(m) += st.w - inv * st.y;
  rhs.segment(m, m_E) += (params.tau_tilde * inv * inv) * st.v_E;
  rhs.tail(m_I) += st.v_hat + inv * st.z;
  rhs -= inv * pb.stacked_rhs();

  const Vector p = factor.solve(rhs);
  st.u = p.head(m);
  st.v_E = p.segment(m, m_E);
  st.v_I = p.tail(m_I);

  const Vector Ntp = N.transpose() * p;
  st.v_hat = (st.v_I - inv * st.z).cwiseMin(0.0);
  st.w = prox_h_conjugate(inv * st.y + st.u, sigma);
  st.s = prox_p_conjugate(inv * st.x - Ntp, sigma, pb.groups(), pb.penalty());

  const double step = params.tau * sigma;
  st.x -= step * (Ntp + st.s);
  st.y -= step * (st.w - st.u);
  st.z -= step * (st.v_I - st.v_hat);
}

SolveResult admm_solve(const Problem& problem, const AdmmParams& params,
                       const PrimalDualPoint* warm, const ProgressCallback& progress) {
  params.validate();
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  const AdmmFactorization factor(problem, params);
  AdmmState st = warm != nullptr ? AdmmState::from_point(*warm) : AdmmState::zeros(problem);

  SolveResult out;
  SolveReport& rep = out.report;
  rep.reason = Termination::MaxIterations;
  for (int k = 1; k <= params.max_iterations; ++k) {
    admm_iterate(problem, factor, params, st);
    rep.outer_iterations = k;
    const bool last = k == params.max_iterations;
    if (k % params.kkt_every != 0 && !last && k != 1) continue;

    const PrimalDualPoint pt = st.point();
    IterationLog log;
    log.k = k;
    log.kkt = compute_kkt_residuals(pt, problem);
    log.sigma = params.sigma;
    rep.eta_history.push_back(log.kkt.eta);
    rep.sigma_history.push_back(params.sigma);
    rep.final = log.kkt;
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
  }
  out.point = st.point();
  rep.nnz = count_nnz(out.point.x);
  rep.seconds = elapsed();
  return out;
}

}  // namespace cssl
