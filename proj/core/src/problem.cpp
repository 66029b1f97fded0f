#include "cssl/problem.hpp"

#include <stdexcept>

namespace cssl {

Problem::Problem(SparseMatrix A, Vector b, SparseMatrix B_E, Vector c_E, SparseMatrix B_I,
                 Vector c_I, GroupPartition groups, PenaltyParams penalty, std::string name)
    : A_(std::move(A)),
      b_(std::move(b)),
      B_E_(std::move(B_E)),
      c_E_(std::move(c_E)),
      B_I_(std::move(B_I)),
      c_I_(std::move(c_I)),
      groups_(std::move(groups)),
      penalty_(penalty),
      name_(std::move(name)) {
  const Index n = A_.cols();
  if (b_.size() != A_.rows()) throw DimensionError("Problem: b does not match A");
  if (B_E_.cols() != n || B_I_.cols() != n)
    throw DimensionError("Problem: constraint matrices must have n columns");
  if (c_E_.size() != B_E_.rows()) throw DimensionError("Problem: c_E does not match B_E");
  if (c_I_.size() != B_I_.rows()) throw DimensionError("Problem: c_I does not match B_I");
  if (groups_.dimension() != n) throw DimensionError("Problem: groups do not cover n");
  penalty_.validate();
  if (!all_finite(b_) || !all_finite(c_E_) || !all_finite(c_I_))
    throw NumericalError("Problem: non-finite data vector");
  A_.makeCompressed();
  B_E_.makeCompressed();
  B_I_.makeCompressed();
  stacked_ = stack_rows(A_, B_E_, B_I_);
  stacked_rhs_.resize(stacked_.rows());
  stacked_rhs_ << b_, c_E_, c_I_;
}

Problem Problem::unconstrained(SparseMatrix A, Vector b, GroupPartition groups,
                               PenaltyParams penalty, std::string name) {
  const Index n = A.cols();
  return Problem(std::move(A), std::move(b), SparseMatrix(0, n), Vector(0), SparseMatrix(0, n),
                 Vector(0), std::move(groups), penalty, std::move(name));
}

Problem Problem::with_penalty(const PenaltyParams& penalty) const {
  Problem copy = *this;
  penalty.validate();
  copy.penalty_ = penalty;
  return copy;
}

PrimalDualPoint PrimalDualPoint::zeros(const Problem& problem) {
  PrimalDualPoint pt;
  pt.x = Vector::Zero(problem.n());
  pt.y = Vector::Zero(problem.m());
  pt.z = Vector::Zero(problem.m_ineq());
  pt.u = Vector::Zero(problem.m());
  pt.v_E = Vector::Zero(problem.m_eq());
  pt.v_I = Vector::Zero(problem.m_ineq());
  pt.w = Vector::Zero(problem.m());
  pt.s = Vector::Zero(problem.n());
  return pt;
}

Vector PrimalDualPoint::stacked_dual() const {
  Vector p(u.size() + v_E.size() + v_I.size());
  p << u, v_E, v_I;
  return p;
}

void PrimalDualPoint::set_stacked_dual(const Problem& problem, const Vector& p) {
  if (p.size() != problem.m_hat()) throw DimensionError("set_stacked_dual: size");
  u = p.head(problem.m());
  v_E = p.segment(problem.m(), problem.m_eq());
  v_I = p.tail(problem.m_ineq());
}

}  // namespace cssl
