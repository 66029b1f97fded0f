#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cssl/bench/run.hpp"
#include "cssl/error.hpp"

namespace {

std::filesystem::path default_output_dir() {
  if (const char* dir = std::getenv("CSSL_OUTPUT_DIR"); dir != nullptr && *dir != '\0')
    return dir;
  return ".";
}

}  // namespace

int main(int argc, char** argv) {
  using cssl::bench::RunConfig;

  CLI::App app{"Sparse-group square-root Lasso benchmark: SSN-ALM and semi-proximal ADMM"};
  app.option_defaults()->always_capture_default();

  std::string solver = "ssnal";
  std::string family;
  std::string dataset;
  std::string config_file;
  std::string setting = "S1";
  std::vector<double> gammas;
  std::optional<long> m, n, m_eq, m_ineq, groups;
  std::optional<unsigned long> seed;
  RunConfig cfg;
  std::string csv_out, table_out;

  app.add_option("--solver", solver, "ssnal, admm or both")
      ->check(CLI::IsMember({"ssnal", "admm", "both"}));
  app.add_option("--family", family, "Constraint family I, II or III");
  app.add_option("--dataset", dataset, "Regression data in label index:value format");
  app.add_option("--config", config_file, "Generator spec file with key = value lines");
  app.add_option("--m", m, "Samples of the generated design");
  app.add_option("--n", n, "Features of the generated design");
  app.add_option("--mE", m_eq, "Equality constraint rows");
  app.add_option("--mI", m_ineq, "Inequality constraint rows");
  app.add_option("--J", groups, "Number of contiguous groups");
  app.add_option("--seed", seed, "Generator seed");
  app.add_option("--setting", setting, "Penalty setting S1 or S2");
  app.add_option("--gamma", gammas, "Penalty scale, repeatable (default 1e-3)");
  app.add_option("--tol", cfg.tol, "Target relative KKT residual");
  app.add_option("--max-outer", cfg.max_outer, "SSN-ALM outer iteration cap");
  app.add_option("--max-admm", cfg.max_admm, "ADMM iteration cap");
  app.add_option("--time-cap", cfg.time_cap_seconds, "Per-solve wall clock cap in seconds");
  app.add_option("--csv-out", csv_out, "CSV results path");
  app.add_option("--table-out", table_out, "Text table path");
  app.add_flag("--deterministic", cfg.deterministic,
               "Report zero times and ignore the time cap for reproducible output");
  app.add_option("--jobs", cfg.jobs, "Worker threads; more than one disables warm starts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      if (!in) {
        std::cerr << "error: cannot open config '" << config_file << "'\n";
        return 2;
      }
      cfg.generator = cssl::parse_generator_config(in);
    }
    if (!family.empty()) cfg.generator.family = cssl::parse_family(family);
    if (m) cfg.generator.m = *m;
    if (n) cfg.generator.n = *n;
    if (m_eq) cfg.generator.m_eq = *m_eq;
    if (m_ineq) cfg.generator.m_ineq = *m_ineq;
    if (groups) cfg.generator.groups = *groups;
    if (seed) cfg.generator.seed = *seed;
    if (!dataset.empty()) cfg.dataset = dataset;
    cfg.solver = cssl::bench::parse_solver(solver);
    cfg.setting = cssl::parse_setting(setting);
    if (!gammas.empty()) cfg.gammas = gammas;
  } catch (const cssl::ParseError& e) {
    std::cerr << "error: config " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  const auto dir = default_output_dir();
  cfg.csv_out = csv_out.empty() ? dir / "cssl_results.csv" : std::filesystem::path(csv_out);
  cfg.table_out = table_out.empty() ? dir / "cssl_results.txt" : std::filesystem::path(table_out);

  const int code = cssl::bench::run(cfg, std::cerr);
  if (code <= 1) {
    std::ifstream table(cfg.table_out);
    std::cout << table.rdbuf();
  }
  return code;
}
