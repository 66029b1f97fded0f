#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "cssl/problem.hpp"

namespace cssl {

/// Constraint patterns of the synthetic families:
///   I   B_E x = 0 and B_I x >= 0, rows selecting pairs of whole groups
///   II  B_E x = 0 only
///   III a single sum-to-zero row
enum class Family { I, II, III };

const char* to_string(Family f);
Family parse_family(const std::string& s);

struct GeneratorSpec {
  Family family = Family::I;
  Index m = 100;
  Index n = 2000;
  Index m_eq = 24;
  Index m_ineq = 24;
  Index groups = 200;
  double active_group_fraction = 0.1;  // ceil(J * fraction) groups carry signal
  double support_fraction = 0.2;       // share of nonzeros inside an active group
  double noise = 0.1;
  std::uint64_t seed = 1;

  /// Applies the family's forced sizes (III: m_E = 1, m_I = 0; II: m_I = 0).
  GeneratorSpec normalized() const;
  void validate() const;
};

/// Reads "key = value" lines (keys: family, m, n, mE, mI, J, seed, noise,
/// active_fraction, support_fraction); '#' starts a comment.
GeneratorSpec parse_generator_config(std::istream& in);

struct ConstraintBlocks {
  SparseMatrix B_E;
  Vector c_E;
  SparseMatrix B_I;
  Vector c_I;
};

/// Row i of a pair pattern selects groups 2i and 2i+1 (mod J) with ones;
/// B_E takes the first m_eq pairs and B_I the next m_ineq. Right-hand sides
/// are zero.
ConstraintBlocks build_constraints(Family family, const GroupPartition& groups, Index m_eq,
                                   Index m_ineq);

/// Gaussian design, planted sparse-group signal, b = A x* + noise * N(0, 1).
/// The penalty is left at zero; see lambda_settings. Deterministic in the seed.
Problem generate(const GeneratorSpec& spec, Vector* ground_truth = nullptr);

struct SparseRegressionData {
  SparseMatrix A;
  Vector b;
};

/// "label index:value ..." per line with 1-based ascending indices. The
/// column count is max(observed max index, min_features).
SparseRegressionData read_sparse_regression(std::istream& in, Index min_features = 0);
SparseRegressionData load_sparse_regression(const std::string& path, Index min_features = 0);
void write_sparse_regression(std::ostream& out, const SparseMatrix& A, const Vector& b);

enum class LambdaSetting { S1, S2 };

LambdaSetting parse_setting(const std::string& s);
const char* to_string(LambdaSetting s);

/// S1: lambda1 = lambda2 = 0.5 gamma ||A^T b||_inf.
/// S2: lambda1 = 0.8 gamma ||A^T b||_inf, lambda2 = 0.2 gamma ||A^T b||_inf.
/// Group weights are sqrt(|G_j|), carried by the partition.
PenaltyParams lambda_settings(const SparseMatrix& A, const Vector& b, double gamma,
                              LambdaSetting setting);

}  // namespace cssl
