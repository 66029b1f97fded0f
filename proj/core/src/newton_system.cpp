#include "cssl/newton_system.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cssl {

ActiveSets build_active_sets(const Vector& v, const Vector& theta, double sigma,
                             const GroupPartition& groups, const PenaltyParams& params) {
  if (v.size() != groups.dimension() || theta.size() != groups.dimension())
    throw DimensionError("build_active_sets: size");
  ActiveSets act;
  act.xi.resize(static_cast<std::size_t>(groups.size()));
  for (Index j = 0; j < groups.size(); ++j) {
    auto& xi = act.xi[static_cast<std::size_t>(j)];
    double sq = 0.0;
    for (Index i : groups.group(j)) {
      if (theta[i] == 1.0) xi.push_back(i);
      sq += v[i] * v[i];
    }
    if (std::sqrt(sq) > sigma * group_threshold(params, groups, j)) {
      act.outside.push_back(j);
      act.r += static_cast<Index>(xi.size());
    }
  }
  act.r2 = static_cast<Index>(act.outside.size());
  return act;
}

NewtonSystem::NewtonSystem(Vector diagonal, Matrix low_rank, Vector v1_column, double sigma,
                           double ridge)
    : diagonal_(std::move(diagonal)),
      low_rank_(std::move(low_rank)),
      v1_column_(std::move(v1_column)),
      sigma_(sigma),
      ridge_(ridge) {
  if (low_rank_.rows() != diagonal_.size()) throw DimensionError("NewtonSystem: factor rows");
  if (v1_column_.size() != 0 && v1_column_.size() != diagonal_.size())
    throw DimensionError("NewtonSystem: rank-one column size");
}

void NewtonSystem::apply_to(const Vector& in, Vector& out) const {
  out = apply_unregularized(in);
  out.noalias() += ridge_ * in;
}

Vector NewtonSystem::apply_unregularized(const Vector& d) const {
  if (d.size() != rows()) throw DimensionError("NewtonSystem: input size");
  Vector out = (diagonal_.array() - ridge_).matrix().cwiseProduct(d);
  if (width() > 0) {
    const Vector t = low_rank_.transpose() * d;
    out.noalias() += sigma_ * (low_rank_ * t);
  }
  if (has_v1_column()) out += (sigma_ * v1_column_.dot(d)) * v1_column_;
  return out;
}

Vector NewtonSystem::preconditioner() const {
  Vector diag = diagonal_;
  if (width() > 0) diag += sigma_ * low_rank_.rowwise().squaredNorm();
  if (has_v1_column()) diag += sigma_ * v1_column_.cwiseAbs2();
  return diag;
}

Matrix NewtonSystem::factor() const {
  Matrix U(rows(), width() + (has_v1_column() ? 1 : 0));
  if (width() > 0) U.leftCols(width()) = low_rank_;
  if (has_v1_column()) U.col(U.cols() - 1) = v1_column_;
  return U;
}

NewtonSystem assemble_system(const ProxHJacobian& jac_h, const ProxPJacobian& jac_p,
                             const Vector& jac_orthant, const SparseMatrix& N,
                             const ActiveSets& active, double sigma, double eps) {
  if (!(eps >= 0.0)) throw std::invalid_argument("assemble_system: eps must be >= 0");
  if (!(sigma > 0.0)) throw std::invalid_argument("assemble_system: sigma must be positive");
  if (jac_p.groups == nullptr) throw std::invalid_argument("assemble_system: detached jacobian");
  const GroupPartition& groups = *jac_p.groups;
  const Index m_hat = N.rows();
  const Index m = jac_h.dim;
  const Index m_I = jac_orthant.size();
  if (m + m_I > m_hat || N.cols() != groups.dimension())
    throw DimensionError("assemble_system: block sizes do not match N");

  Vector diagonal = Vector::Constant(m_hat, eps);
  Vector v1_column;
  if (jac_h.outside()) {
    diagonal.head(m).array() += sigma * (1.0 - jac_h.scale);
    v1_column = Vector::Zero(m_hat);
    v1_column.head(m) = std::sqrt(jac_h.scale) * jac_h.direction;
  }
  diagonal.tail(m_I) += sigma * jac_orthant;

  Matrix D = Matrix::Zero(m_hat, active.r + active.r2);
  Index col = 0;
  Index ccol = active.r;
  for (Index j : active.outside) {
    const double a = jac_p.group_scale[j];
    const double keep = 1.0 - a;
    if (!(keep >= 0.0))
      throw NumericalError("assemble_system: group " + std::to_string(j) +
                           " is not outside its ball");
    const double bscale = std::sqrt(keep);
    const double cscale = std::sqrt(a) / jac_p.group_norm[j];
    for (Index i : active.xi[static_cast<std::size_t>(j)]) {
      const double vi = jac_p.v[i];
      for (SparseMatrix::InnerIterator it(N, i); it; ++it) {
        D(it.row(), col) += bscale * it.value();
        D(it.row(), ccol) += cscale * vi * it.value();
      }
      ++col;
    }
    ++ccol;
  }
  return NewtonSystem(std::move(diagonal), std::move(D), std::move(v1_column), sigma, eps);
}

namespace {

constexpr Index kDirectMaxWidth = 500;
constexpr Index kDirectMaxDim = 5000;
constexpr int kPcgCap = 500;

// Returns false when no factorization succeeded.
bool solve_direct(const NewtonSystem& sys, const Vector& rhs, Vector& step) {
  const Matrix U = sys.factor();
  const Vector& diag = sys.diagonal();
  const double sigma = sys.sigma();
  const bool diag_invertible = (diag.array() > 0.0).all();
  try {
    if (U.cols() < sys.rows() && diag_invertible) {
      // (L + s U U^T)^-1 = L^-1 - L^-1 U (I/s + U^T L^-1 U)^-1 U^T L^-1
      const Vector inv = diag.cwiseInverse();
      const Matrix LU = inv.asDiagonal() * U;
      Matrix core = U.transpose() * LU;
      core.diagonal().array() += 1.0 / sigma;
      const CholeskyFactor chol(core);
      auto woodbury = [&](const Vector& r) -> Vector {
        const Vector lr = inv.cwiseProduct(r);
        const Vector t = U.transpose() * r.cwiseProduct(inv);
        return lr - LU * chol.solve(t);
      };
      step = woodbury(rhs);
      // Refinement guards against cancellation when diag spans many scales.
      const double target = 1e-12 * (1.0 + rhs.norm());
      for (int pass = 0; pass < 3; ++pass) {
        const Vector res = rhs - sys.apply(step);
        if (res.norm() <= target) break;
        step += woodbury(res);
      }
      return true;
    }
    Matrix full = sigma * (U * U.transpose());
    full.diagonal() += diag;
    step = CholeskyFactor(full).solve(rhs);
    return true;
  } catch (const NumericalError&) {
    return false;
  }
}

}  // namespace

NewtonSolveResult solve_newton(const NewtonSystem& system, const Vector& rhs,
                               NewtonStrategy strategy, double pcg_tol) {
  if (rhs.size() != system.rows()) throw DimensionError("solve_newton: rhs size");
  NewtonSolveResult out;
  const Index k = system.width() + (system.has_v1_column() ? 1 : 0);
  if (strategy == NewtonStrategy::Auto)
    strategy = (k <= kDirectMaxWidth && system.rows() <= kDirectMaxDim) ? NewtonStrategy::Direct
                                                                       : NewtonStrategy::Pcg;

  if (strategy == NewtonStrategy::Direct && solve_direct(system, rhs, out.step)) {
    out.used = NewtonStrategy::Direct;
    out.residual = (system.apply_unregularized(out.step) - rhs).norm();
    out.converged = true;
    return out;
  }

  PcgOptions opts;
  opts.max_iterations = static_cast<int>(std::min<Index>(system.rows(), kPcgCap));
  opts.tolerance = pcg_tol > 0.0 ? pcg_tol : 1e-12;
  Vector pre = system.preconditioner();
  for (Index i = 0; i < pre.size(); ++i)
    if (!(pre[i] > 0.0)) pre[i] = 1.0;
  opts.preconditioner = std::move(pre);
  const double eps = system.ridge();
  const double tol = opts.tolerance;
  // (H + eps I) x - rhs = -r, so H x - rhs = -(r + eps x).
  opts.converged = [eps, tol](const Vector& x, const Vector& r) {
    return (r + eps * x).norm() <= tol;
  };
  const PcgResult pcg = pcg_solve(system, rhs, opts);
  out.step = pcg.solution;
  out.used = NewtonStrategy::Pcg;
  out.pcg_iterations = pcg.iterations;
  out.converged = pcg.converged;
  out.residual = (system.apply_unregularized(out.step) - rhs).norm();
  return out;
}

}  // namespace cssl
