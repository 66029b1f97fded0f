#include "cssl/linalg.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace cssl {

bool all_finite(const Vector& v) { return v.allFinite(); }

Vector LinearOperator::apply(const Vector& in) const {
  Vector out(rows());
  apply_to(in, out);
  return out;
}

Vector LinearOperator::apply_adjoint(const Vector& in) const {
  Vector out(cols());
  apply_adjoint_to(in, out);
  return out;
}

void SparseOperator::apply_to(const Vector& in, Vector& out) const {
  if (in.size() != mat_.cols()) throw DimensionError("SparseOperator: input size");
  out.noalias() = mat_ * in;
}

void SparseOperator::apply_adjoint_to(const Vector& in, Vector& out) const {
  if (in.size() != mat_.rows()) throw DimensionError("SparseOperator: adjoint input size");
  out.noalias() = mat_.transpose() * in;
}

void DenseOperator::apply_to(const Vector& in, Vector& out) const {
  if (in.size() != mat_.cols()) throw DimensionError("DenseOperator: input size");
  out.noalias() = mat_ * in;
}

void DenseOperator::apply_adjoint_to(const Vector& in, Vector& out) const {
  if (in.size() != mat_.rows()) throw DimensionError("DenseOperator: adjoint input size");
  out.noalias() = mat_.transpose() * in;
}

void PcgOptions::validate(Index dim) const {
  if (!(tolerance > 0.0)) throw std::invalid_argument("pcg: tolerance must be positive");
  if (max_iterations < 0) throw std::invalid_argument("pcg: negative iteration cap");
  if (preconditioner.size() != 0) {
    if (preconditioner.size() != dim) throw DimensionError("pcg: preconditioner size");
    if (!(preconditioner.array() > 0.0).all())
      throw std::invalid_argument("pcg: preconditioner entries must be positive");
  }
}

PcgResult pcg_solve(const LinearOperator& op, const Vector& rhs,
                    const PcgOptions& opts, const Vector* x0) {
  const Index n = op.rows();
  if (op.cols() != n) throw DimensionError("pcg: operator is not square");
  if (rhs.size() != n) throw DimensionError("pcg: rhs size");
  if (x0 != nullptr && x0->size() != n) throw DimensionError("pcg: initial guess size");
  opts.validate(n);
  if (!all_finite(rhs)) throw NumericalError("pcg: non-finite rhs");

  const bool precondition = opts.preconditioner.size() == n;
  auto precond = [&](const Vector& r) -> Vector {
    if (!precondition) return r;
    return r.cwiseQuotient(opts.preconditioner);
  };

  const double rhs_norm = rhs.norm();
  const double threshold = std::max(opts.tolerance, opts.tolerance * rhs_norm);
  auto done = [&](const Vector& x, const Vector& r) {
    if (opts.converged) return opts.converged(x, r);
    return r.norm() <= threshold;
  };

  PcgResult res;
  Vector x = x0 != nullptr ? *x0 : Vector::Zero(n);
  Vector r = rhs;
  Vector q(n);
  if (x0 != nullptr) {
    op.apply_to(x, q);
    r -= q;
  }

  Vector best = x;
  double best_norm = r.norm();
  if (done(x, r)) {
    res.solution = std::move(x);
    res.residual_norm = best_norm;
    res.converged = true;
    return res;
  }

  Vector z = precond(r);
  Vector p = z;
  double rz = r.dot(z);
  for (int it = 1; it <= opts.max_iterations; ++it) {
    op.apply_to(p, q);
    const double pq = p.dot(q);
    if (!std::isfinite(pq)) throw NumericalError("pcg: non-finite curvature");
    if (pq <= 0.0) {
      if (p.squaredNorm() == 0.0) break;
      throw NumericalError("pcg: operator is not positive definite");
    }
    const double alpha = rz / pq;
    x.noalias() += alpha * p;
    if (opts.residual_refresh > 0 && it % opts.residual_refresh == 0) {
      op.apply_to(x, q);
      r = rhs - q;
    } else {
      r.noalias() -= alpha * q;
    }
    if (!all_finite(x) || !all_finite(r)) throw NumericalError("pcg: non-finite iterate");

    res.iterations = it;
    const double rn = r.norm();
    if (rn < best_norm) {
      best_norm = rn;
      best = x;
    }
    if (done(x, r)) {
      res.solution = std::move(x);
      res.residual_norm = rn;
      res.converged = true;
      return res;
    }

    z = precond(r);
    const double rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }

  res.solution = std::move(best);
  res.residual_norm = best_norm;
  res.converged = false;
  return res;
}

CholeskyFactor::CholeskyFactor(const Matrix& mat) {
  if (mat.rows() != mat.cols()) throw DimensionError("cholesky: matrix is not square");
  if (!mat.allFinite()) throw NumericalError("cholesky: non-finite entries");
  llt_.compute(mat);
  if (llt_.info() != Eigen::Success)
    throw NumericalError("cholesky: non-positive pivot, matrix is not positive definite");
}

Vector CholeskyFactor::solve(const Vector& rhs) const {
  if (rhs.size() != dim()) throw DimensionError("cholesky: rhs size");
  return llt_.solve(rhs);
}

Matrix CholeskyFactor::solve(const Matrix& rhs) const {
  if (rhs.rows() != dim()) throw DimensionError("cholesky: rhs rows");
  return llt_.solve(rhs);
}

Vector cholesky_solve(const Matrix& mat, const Vector& rhs) {
  return CholeskyFactor(mat).solve(rhs);
}

SparseMatrix submatrix_columns(const SparseMatrix& mat, std::span<const Index> cols) {
  Index nnz = 0;
  for (Index c : cols) {
    if (c < 0 || c >= mat.cols())
      throw std::out_of_range("submatrix_columns: column " + std::to_string(c) +
                              " outside [0, " + std::to_string(mat.cols()) + ")");
    nnz += mat.col(c).nonZeros();
  }
  SparseMatrix out(mat.rows(), static_cast<Index>(cols.size()));
  out.reserve(nnz);
  for (Index k = 0; k < static_cast<Index>(cols.size()); ++k) {
    out.startVec(k);
    for (SparseMatrix::InnerIterator it(mat, cols[k]); it; ++it)
      out.insertBack(it.row(), k) = it.value();
  }
  out.finalize();
  return out;
}

SparseMatrix sparse_from_dense(const Matrix& dense, double drop) {
  std::vector<Eigen::Triplet<double>> trips;
  for (Index j = 0; j < dense.cols(); ++j)
    for (Index i = 0; i < dense.rows(); ++i)
      if (std::abs(dense(i, j)) > drop) trips.emplace_back(i, j, dense(i, j));
  SparseMatrix out(dense.rows(), dense.cols());
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

SparseMatrix stack_rows(const SparseMatrix& top, const SparseMatrix& middle,
                        const SparseMatrix& bottom) {
  const Index n = top.cols();
  if (middle.cols() != n || bottom.cols() != n)
    throw DimensionError("stack_rows: column counts differ");
  const Index r1 = top.rows();
  const Index r2 = middle.rows();
  SparseMatrix out(r1 + r2 + bottom.rows(), n);
  out.reserve(top.nonZeros() + middle.nonZeros() + bottom.nonZeros());
  for (Index j = 0; j < n; ++j) {
    out.startVec(j);
    for (SparseMatrix::InnerIterator it(top, j); it; ++it) out.insertBack(it.row(), j) = it.value();
    for (SparseMatrix::InnerIterator it(middle, j); it; ++it)
      out.insertBack(r1 + it.row(), j) = it.value();
    for (SparseMatrix::InnerIterator it(bottom, j); it; ++it)
      out.insertBack(r1 + r2 + it.row(), j) = it.value();
  }
  out.finalize();
  return out;
}

}  // namespace cssl
