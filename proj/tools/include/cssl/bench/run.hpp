#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cssl/problems.hpp"

namespace cssl::bench {

enum class SolverChoice { Ssnal, Admm, Both };

SolverChoice parse_solver(const std::string& s);

struct RunConfig {
  SolverChoice solver = SolverChoice::Ssnal;
  // A dataset path takes precedence over the generator.
  std::optional<std::filesystem::path> dataset;
  GeneratorSpec generator;
  LambdaSetting setting = LambdaSetting::S1;
  std::vector<double> gammas{1e-3};
  double tol = 1e-6;
  int max_outer = 200;
  int max_admm = 10000;
  double time_cap_seconds = 4.0 * 3600.0;
  std::filesystem::path csv_out;
  std::filesystem::path table_out;
  // Times are reported as zero and the time cap is ignored, so output bytes
  // depend only on the configuration.
  bool deterministic = false;
  // Worker threads for independent (solver, gamma) cells; > 1 disables warm starts.
  int jobs = 1;

  void validate() const;
};

struct ResultRow {
  std::string pbname;
  Index m = 0;
  Index n = 0;
  Index m_eq = 0;
  Index m_ineq = 0;
  Index groups = 0;
  std::string setting;
  double gamma = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  std::string solver;  // "ssnal" or "admm"
  Index nnz = 0;
  double eta = 0.0;
  double pobj = 0.0;
  double dobj = 0.0;
  int iterations = 0;
  int newton_iterations = 0;
  double seconds = 0.0;
  std::string status;  // termination reason, or "error"
};

/// Fixed column order; numbers written with format_exact.
void write_csv(std::ostream& out, const std::vector<ResultRow>& rows);
std::vector<ResultRow> read_csv(std::istream& in);

/// Aligned text table: pbname, lambda1, lambda2, nnz, then "a | b" cells
/// (a = SSN-ALM, b = ADMM) for eta, pobj, iter and time.
std::string format_table(const std::vector<ResultRow>& rows);

/// Solves every (solver, gamma) cell of the configuration. Gammas are visited
/// in descending order and each solver warm-starts from its previous solution.
std::vector<ResultRow> solve_all(const RunConfig& config, std::ostream* log = nullptr);

/// solve_all plus output files. Returns 0 on success, 1 if a solve raised an
/// internal error, 2 for an invalid configuration, 3 when the dataset is missing.
int run(const RunConfig& config, std::ostream& log);

}  // namespace cssl::bench
