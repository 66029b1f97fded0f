#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "cssl/kkt.hpp"
#include "cssl/problem.hpp"
#include "cssl/ssn.hpp"

namespace cssl {

enum class InnerStopCriterion { A, B, BPrime };

struct AlmParams {
  double sigma0 = 1.0;
  double rho = 1.3;
  double sigma_max = 1e6;
  // When >= 0, sigma grows only after inner solves with at most this many
  // Newton steps; negative grows it every outer iteration.
  int grow_when_newton_at_most = -1;
  double tol = 1e-6;
  int max_outer = 200;
  double time_cap_seconds = std::numeric_limits<double>::infinity();

  // eps_k = eps_scale/(k+1)^2, delta_k = delta_scale/(k+1)^2,
  // delta'_k = delta_prime_scale/(k+1).
  double eps_scale = 1e-4;
  double delta_scale = 1e-4;
  double delta_prime_scale = 1e-4;
  bool use_A = true;
  bool use_B = false;
  bool use_Bprime = true;
  // The inner solve also stops once ||grad phi|| drops below
  // inner_floor * tol * (1 + ||b|| + ||c_E|| + ||c_I||); 0 disables this.
  double inner_floor = 0.1;

  double epsilon(int k) const;
  double delta(int k) const;
  double delta_prime(int k) const;
  void validate() const;
};

struct InnerStopInputs {
  double grad_norm = 0.0;
  double multiplier_delta = 0.0;  // ||(x+ - x, y+ - y, z+ - z)||
  double multiplier_norm = 0.0;   // ||(x, y, z)||
  double sigma = 1.0;
  int k = 0;
};

/// Gradient-norm gauges for criteria (A) and (B) and the literal (B'):
///   (A)  ||grad|| <= eps_k / sigma_k * max(1, ||(x,y,z)||)
///   (B)  ||grad|| <= delta_k / sigma_k * ||multiplier delta||
///   (B') ||grad|| <= delta'_k / (2 sigma_k) * ||multiplier delta||
bool check_inner_stop(const InnerStopInputs& in, const AlmParams& params,
                      InnerStopCriterion criterion);

struct IterationLog {
  int k = 0;
  KktResiduals kkt;
  double sigma = 0.0;
  int newton_steps = 0;
};

using ProgressCallback = std::function<void(const IterationLog&)>;

enum class Termination { Converged, MaxIterations, TimeLimit, InnerFailure };

const char* to_string(Termination t);

struct SolveReport {
  int outer_iterations = 0;
  int newton_iterations = 0;  // zero for ADMM
  std::vector<double> eta_history;
  std::vector<double> sigma_history;
  KktResiduals final;
  double seconds = 0.0;
  Index nnz = 0;
  Termination reason = Termination::MaxIterations;
  std::vector<std::string> warnings;
};

struct SolveResult {
  PrimalDualPoint point;
  SolveReport report;
};

/// Augmented Lagrangian method on the dual with semismooth Newton inner
/// solves. Starts from `warm` when given, else from all zeros.
SolveResult alm_solve(const Problem& problem, const AlmParams& params,
                      const SsnParams& ssn_params, const PrimalDualPoint* warm = nullptr,
                      const ProgressCallback& progress = {});

}  // namespace cssl
