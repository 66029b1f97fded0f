#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <functional>
#include <span>

#include "cssl/error.hpp"

namespace cssl {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
// Column-major (CSC) is canonical: the Newton system extracts column blocks.
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor>;

bool all_finite(const Vector& v);

/// Abstract linear map R^cols -> R^rows together with its adjoint.
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;

  virtual Index rows() const = 0;
  virtual Index cols() const = 0;
  virtual void apply_to(const Vector& in, Vector& out) const = 0;
  virtual void apply_adjoint_to(const Vector& in, Vector& out) const = 0;

  Vector apply(const Vector& in) const;
  Vector apply_adjoint(const Vector& in) const;
};

class SparseOperator final : public LinearOperator {
 public:
  explicit SparseOperator(SparseMatrix mat) : mat_(std::move(mat)) {}

  Index rows() const override { return mat_.rows(); }
  Index cols() const override { return mat_.cols(); }
  void apply_to(const Vector& in, Vector& out) const override;
  void apply_adjoint_to(const Vector& in, Vector& out) const override;

  const SparseMatrix& matrix() const { return mat_; }

 private:
  SparseMatrix mat_;
};

class DenseOperator final : public LinearOperator {
 public:
  explicit DenseOperator(Matrix mat) : mat_(std::move(mat)) {}

  Index rows() const override { return mat_.rows(); }
  Index cols() const override { return mat_.cols(); }
  void apply_to(const Vector& in, Vector& out) const override;
  void apply_adjoint_to(const Vector& in, Vector& out) const override;

 private:
  Matrix mat_;
};

/// Self-adjoint operator given by a callable; the adjoint is the map itself.
class SymmetricOperator final : public LinearOperator {
 public:
  using Apply = std::function<void(const Vector&, Vector&)>;

  SymmetricOperator(Index dim, Apply fn) : dim_(dim), fn_(std::move(fn)) {}

  Index rows() const override { return dim_; }
  Index cols() const override { return dim_; }
  void apply_to(const Vector& in, Vector& out) const override { fn_(in, out); }
  void apply_adjoint_to(const Vector& in, Vector& out) const override {
    fn_(in, out);
  }

 private:
  Index dim_;
  Apply fn_;
};

struct PcgOptions {
  int max_iterations = 500;
  double tolerance = 1e-10;
  // Entries of the diagonal preconditioner (approximating diag(op)); empty
  // means no preconditioning.
  Vector preconditioner;
  // The recursively updated residual is replaced by rhs - op(x) this often.
  int residual_refresh = 50;
  // Optional convergence test on (iterate, residual) replacing the default
  // ||r|| <= max(tol, tol * ||rhs||) rule.
  std::function<bool(const Vector&, const Vector&)> converged;

  void validate(Index dim) const;
};

struct PcgResult {
  Vector solution;
  double residual_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Preconditioned conjugate gradients for a symmetric positive definite
/// operator. Starts from x0 when given, else from zero. On hitting the
/// iteration cap the iterate with the smallest residual seen is returned.
PcgResult pcg_solve(const LinearOperator& op, const Vector& rhs,
                    const PcgOptions& opts, const Vector* x0 = nullptr);

/// Dense LLT factorization kept for repeated solves.
class CholeskyFactor {
 public:
  // Throws NumericalError on a non-positive pivot.
  explicit CholeskyFactor(const Matrix& mat);

  Index dim() const { return llt_.rows(); }
  Vector solve(const Vector& rhs) const;
  Matrix solve(const Matrix& rhs) const;

 private:
  Eigen::LLT<Matrix> llt_;
};

Vector cholesky_solve(const Matrix& mat, const Vector& rhs);

/// Column k of the result is column cols[k] of mat.
SparseMatrix submatrix_columns(const SparseMatrix& mat,
                               std::span<const Index> cols);

SparseMatrix sparse_from_dense(const Matrix& dense, double drop = 0.0);

/// Vertical concatenation [top; middle; bottom] with matching column counts.
SparseMatrix stack_rows(const SparseMatrix& top, const SparseMatrix& middle,
                        const SparseMatrix& bottom);

}  // namespace cssl
