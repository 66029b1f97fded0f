#include "cssl/kkt.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "cssl/prox.hpp"

namespace cssl {

double primal_objective(const Problem& problem, const Vector& x) {
  return (problem.A() * x - problem.b()).norm() +
         penalty_value(x, problem.groups(), problem.penalty());
}

double dual_objective(const Problem& problem, const PrimalDualPoint& point) {
  return -(problem.b().dot(point.u) + problem.c_E().dot(point.v_E) +
           problem.c_I().dot(point.v_I));
}

KktResiduals compute_kkt_residuals(const PrimalDualPoint& pt, const Problem& pb) {
  if (pt.x.size() != pb.n() || pt.s.size() != pb.n() || pt.y.size() != pb.m() ||
      pt.u.size() != pb.m() || pt.w.size() != pb.m() || pt.v_E.size() != pb.m_eq() ||
      pt.v_I.size() != pb.m_ineq() || pt.z.size() != pb.m_ineq())
    throw DimensionError("compute_kkt_residuals: point does not match problem");

  KktResiduals res;
  const Vector BIx = pb.B_I() * pt.x;

  const double rp = (pb.A() * pt.x - pt.y - pb.b()).norm() + (pb.B_E() * pt.x - pb.c_E()).norm() +
                    (BIx - pb.c_I() + pt.z).norm();
  res.primal = rp / (1.0 + pb.b().norm() + pb.c_E().norm() + pb.c_I().norm());

  const Vector Nt = pb.A().transpose() * pt.u + pb.B_E().transpose() * pt.v_E +
                    pb.B_I().transpose() * pt.v_I;
  const double rd = (Nt + pt.s).norm() + (pt.w - pt.u).norm();
  res.dual = rd / (1.0 + pt.u.norm() + pt.v_E.norm() + pt.v_I.norm() + pt.s.norm() +
                   pt.w.norm());

  const Vector wy = pt.w + pt.y;
  const Vector sx = pt.s + pt.x;
  const Vector neg = (BIx - pb.c_I() + pt.v_I).cwiseMin(0.0);
  const double rc = (pt.w - prox_h_conjugate(wy, 1.0)).norm() +
                    (pt.s - prox_p_conjugate(sx, 1.0, pb.groups(), pb.penalty())).norm() +
                    (pt.v_I - neg).norm();
  res.complementarity = rc / (1.0 + pt.w.norm() + pt.s.norm() + pt.v_I.norm());

  res.eta = std::max({res.primal, res.dual, res.complementarity});
  res.pobj = primal_objective(pb, pt.x);
  res.dobj = dual_objective(pb, pt);
  res.gap = std::abs(res.pobj - res.dobj) / (1.0 + std::abs(res.pobj) + std::abs(res.dobj));
  return res;
}

Index count_nnz(const Vector& x) {
  std::vector<double> mags(x.data(), x.data() + x.size());
  for (double& v : mags) v = std::abs(v);
  const double total = x.lpNorm<1>();
  if (total == 0.0) return 0;
  std::sort(mags.begin(), mags.end(), std::greater<>());
  const double target = 0.9999 * total;
  double partial = 0.0;
  for (std::size_t k = 0; k < mags.size(); ++k) {
    partial += mags[k];
    if (partial >= target) return static_cast<Index>(k + 1);
  }
  return x.size();
}

}  // namespace cssl
