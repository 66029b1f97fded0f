#include "cssl/bench/run.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "cssl/admm.hpp"
#include "cssl/alm.hpp"
#include "cssl/bench/format.hpp"
#include "cssl/error.hpp"

namespace cssl::bench {

SolverChoice parse_solver(const std::string& s) {
  if (s == "ssnal") return SolverChoice::Ssnal;
  if (s == "admm") return SolverChoice::Admm;
  if (s == "both") return SolverChoice::Both;
  throw std::invalid_argument("unknown solver '" + s + "' (expected ssnal, admm or both)");
}

void RunConfig::validate() const {
  if (gammas.empty()) throw std::invalid_argument("at least one gamma is required");
  for (double g : gammas)
    if (!(g > 0.0) || !std::isfinite(g)) throw std::invalid_argument("gamma must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (max_outer <= 0 || max_admm <= 0) throw std::invalid_argument("iteration caps must be positive");
  if (!(time_cap_seconds > 0.0)) throw std::invalid_argument("time cap must be positive");
  if (jobs < 1) throw std::invalid_argument("jobs must be >= 1");
  if (!dataset) generator.validate();
}

namespace {

const char* const kColumns[] = {"pbname", "m",      "n",       "mE",   "mI",     "J",
                                "setting", "gamma", "lambda1", "lambda2", "solver", "nnz",
                                "eta",    "pobj",   "dobj",    "iter", "newton", "seconds",
                                "status"};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

struct Instance {
  Problem problem;
  std::string pbname;
};

Instance load_instance(const RunConfig& config) {
  const GeneratorSpec spec = config.generator.normalized();
  if (!config.dataset) {
    GeneratorSpec s = spec;
    Problem p = generate(s);
    std::string name = p.name();
    return {std::move(p), std::move(name)};
  }
  SparseRegressionData data = load_sparse_regression(config.dataset->string());
  const Index n = data.A.cols();
  GroupPartition groups = GroupPartition::contiguous(n, std::min(spec.groups, n));
  ConstraintBlocks cons = build_constraints(spec.family, groups, spec.m_eq, spec.m_ineq);
  std::string name = config.dataset->stem().string();
  Problem p(std::move(data.A), std::move(data.b), std::move(cons.B_E), std::move(cons.c_E),
            std::move(cons.B_I), std::move(cons.c_I), std::move(groups), PenaltyParams{}, name);
  return {std::move(p), std::move(name)};
}

struct Cell {
  double gamma;
  bool ssnal;
};

ResultRow solve_cell(const RunConfig& config, const Instance& inst, const Cell& cell,
                     const PrimalDualPoint* warm, PrimalDualPoint* solution) {
  const Problem& base = inst.problem;
  const PenaltyParams penalty = lambda_settings(base.A(), base.b(), cell.gamma, config.setting);
  const Problem problem = base.with_penalty(penalty);
  const double cap = config.deterministic ? std::numeric_limits<double>::infinity()
                                          : config.time_cap_seconds;

  ResultRow row;
  row.pbname = inst.pbname;
  row.m = problem.m();
  row.n = problem.n();
  row.m_eq = problem.m_eq();
  row.m_ineq = problem.m_ineq();
  row.groups = problem.groups().size();
  row.setting = to_string(config.setting);
  row.gamma = cell.gamma;
  row.lambda1 = penalty.lambda1;
  row.lambda2 = penalty.lambda2;
  row.solver = cell.ssnal ? "ssnal" : "admm";
  try {
    SolveResult res;
    if (cell.ssnal) {
      AlmParams params;
      params.tol = config.tol;
      params.max_outer = config.max_outer;
      params.time_cap_seconds = cap;
      res = alm_solve(problem, params, SsnParams{}, warm);
    } else {
      AdmmParams params;
      params.tol = config.tol;
      params.max_iterations = config.max_admm;
      params.time_cap_seconds = cap;
      res = admm_solve(problem, params, warm);
    }
    row.nnz = res.report.nnz;
    row.eta = res.report.final.eta;
    row.pobj = res.report.final.pobj;
    row.dobj = res.report.final.dobj;
    row.iterations = res.report.outer_iterations;
    row.newton_iterations = res.report.newton_iterations;
    row.seconds = config.deterministic ? 0.0 : res.report.seconds;
    row.status = to_string(res.report.reason);
    if (solution != nullptr) *solution = std::move(res.point);
  } catch (const Error& e) {
    row.status = "error";
    row.eta = std::numeric_limits<double>::quiet_NaN();
    row.pobj = row.eta;
    row.dobj = row.eta;
    if (solution != nullptr) *solution = PrimalDualPoint{};
  }
  return row;
}

void log_row(std::ostream* log, const ResultRow& row) {
  if (log == nullptr) return;
  *log << row.pbname << " " << row.solver << " gamma=" << format_sci(row.gamma, 2)
       << " eta=" << format_sci(row.eta, 2) << " pobj=" << format_sci(row.pobj, 5)
       << " iter=" << row.iterations << " status=" << row.status << '\n';
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  bool first = true;
  for (const char* c : kColumns) {
    out << (first ? "" : ",") << c;
    first = false;
  }
  out << '\n';
  for (const auto& r : rows) {
    out << csv_field(r.pbname) << ',' << r.m << ',' << r.n << ',' << r.m_eq << ',' << r.m_ineq
        << ',' << r.groups << ',' << r.setting << ',' << format_exact(r.gamma) << ','
        << format_exact(r.lambda1) << ',' << format_exact(r.lambda2) << ',' << r.solver << ','
        << r.nnz << ',' << format_exact(r.eta) << ',' << format_exact(r.pobj) << ','
        << format_exact(r.dobj) << ',' << r.iterations << ',' << r.newton_iterations << ','
        << format_exact(r.seconds) << ',' << r.status << '\n';
  }
}

std::vector<ResultRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("missing CSV header", 1);
  constexpr std::size_t ncol = std::size(kColumns);
  if (split_csv(line).size() != ncol) throw ParseError("unexpected CSV header", 1);
  std::vector<ResultRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != ncol) throw ParseError("wrong number of CSV fields", lineno);
    try {
      ResultRow r;
      r.pbname = f[0];
      r.m = std::stol(f[1]);
      r.n = std::stol(f[2]);
      r.m_eq = std::stol(f[3]);
      r.m_ineq = std::stol(f[4]);
      r.groups = std::stol(f[5]);
      r.setting = f[6];
      r.gamma = std::stod(f[7]);
      r.lambda1 = std::stod(f[8]);
      r.lambda2 = std::stod(f[9]);
      r.solver = f[10];
      r.nnz = std::stol(f[11]);
      r.eta = std::stod(f[12]);
      r.pobj = std::stod(f[13]);
      r.dobj = std::stod(f[14]);
      r.iterations = std::stoi(f[15]);
      r.newton_iterations = std::stoi(f[16]);
      r.seconds = std::stod(f[17]);
      r.status = f[18];
      rows.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw ParseError("malformed CSV value", lineno);
    }
  }
  return rows;
}

std::string format_table(const std::vector<ResultRow>& rows) {
  if (rows.empty()) throw std::invalid_argument("format_table: no rows");

  // One table line per (pbname, setting, gamma); a = ssnal, b = admm.
  struct Line {
    const ResultRow* a = nullptr;
    const ResultRow* b = nullptr;
    const ResultRow& any() const { return a != nullptr ? *a : *b; }
  };
  std::vector<Line> lines;
  for (const auto& r : rows) {
    auto it = std::find_if(lines.begin(), lines.end(), [&](const Line& l) {
      const ResultRow& o = l.any();
      return o.pbname == r.pbname && o.setting == r.setting && o.gamma == r.gamma;
    });
    if (it == lines.end()) {
      lines.emplace_back();
      it = lines.end() - 1;
    }
    (r.solver == "admm" ? it->b : it->a) = &r;
  }

  auto pair = [](const Line& l, const std::function<std::string(const ResultRow&)>& f) {
    if (l.a != nullptr && l.b != nullptr) return f(*l.a) + " | " + f(*l.b);
    return f(l.any());
  };
  auto iter = [](const ResultRow& r) {
    return r.solver == "ssnal"
               ? std::to_string(r.iterations) + "(" + std::to_string(r.newton_iterations) + ")"
               : std::to_string(r.iterations);
  };

  std::vector<std::vector<std::string>> cells;
  cells.push_back({"pbname", "lambda1", "lambda2", "nnz", "eta_kkt", "pobj", "iter", "time"});
  std::string current;
  int within = 0;
  for (const auto& l : lines) {
    const ResultRow& r = l.any();
    if (r.pbname != current) {
      current = r.pbname;
      within = 0;
    }
    std::string label;
    if (within == 0) {
      label = r.pbname;
    } else if (within == 1) {
      label = "(" + std::to_string(r.m) + "," + std::to_string(r.n) + "," +
              std::to_string(r.m_eq) + "," + std::to_string(r.m_ineq) + ");";
    } else if (within == 2) {
      label = std::to_string(r.groups);
    }
    ++within;
    cells.push_back({label, format_sci(r.lambda1, 4), format_sci(r.lambda2, 4),
                     std::to_string(r.nnz),
                     pair(l, [](const ResultRow& x) { return format_sci(x.eta, 2); }),
                     pair(l, [](const ResultRow& x) { return format_sci(x.pobj, 5); }),
                     pair(l, iter),
                     pair(l, [](const ResultRow& x) { return format_time(x.seconds); })});
  }

  std::vector<std::size_t> width(cells.front().size(), 0);
  for (const auto& row : cells)
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  std::ostringstream out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    std::string text;
    for (std::size_t c = 0; c < cells[i].size(); ++c) {
      if (c > 0) text += "  ";
      const std::string& v = cells[i][c];
      text += c == 0 ? v + std::string(width[c] - v.size(), ' ')
                     : std::string(width[c] - v.size(), ' ') + v;
    }
    while (!text.empty() && text.back() == ' ') text.pop_back();
    out << text << '\n';
    if (i == 0) {
      std::size_t total = 0;
      for (auto w : width) total += w + 2;
      out << std::string(total - 2, '-') << '\n';
    }
  }
  return out.str();
}

std::vector<ResultRow> solve_all(const RunConfig& config, std::ostream* log) {
  config.validate();
  const Instance inst = load_instance(config);

  std::vector<double> gammas = config.gammas;
  std::sort(gammas.begin(), gammas.end(), std::greater<>());
  std::vector<bool> solvers;
  if (config.solver != SolverChoice::Admm) solvers.push_back(true);
  if (config.solver != SolverChoice::Ssnal) solvers.push_back(false);

  // Output order: gamma descending, SSN-ALM before ADMM.
  std::vector<Cell> cells;
  for (double g : gammas)
    for (bool s : solvers) cells.push_back({g, s});
  std::vector<ResultRow> rows(cells.size());

  if (config.jobs <= 1) {
    std::vector<PrimalDualPoint> warm(2);
    std::vector<bool> have(2, false);
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const int slot = cells[i].ssnal ? 0 : 1;
      PrimalDualPoint next;
      rows[i] = solve_cell(config, inst, cells[i], have[slot] ? &warm[slot] : nullptr, &next);
      have[slot] = rows[i].status != "error";
      if (have[slot]) warm[slot] = std::move(next);
      log_row(log, rows[i]);
    }
    return rows;
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++)
      rows[i] = solve_cell(config, inst, cells[i], nullptr, nullptr);
  };
  std::vector<std::thread> pool;
  const auto count = std::min<std::size_t>(static_cast<std::size_t>(config.jobs), cells.size());
  for (std::size_t t = 0; t < count; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (const auto& r : rows) log_row(log, r);
  return rows;
}

int run(const RunConfig& config, std::ostream& log) {
  std::vector<ResultRow> rows;
  try {
    rows = solve_all(config, &log);
  } catch (const IoError& e) {
    log << "error: " << e.what() << '\n';
    return 3;
  } catch (const ParseError& e) {
    log << "error: dataset " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    log << "error: " << e.what() << '\n';
    return 2;
  }

  auto write_file = [&](const std::filesystem::path& path, const std::string& text) {
    if (path.empty()) return true;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) {
      log << "error: cannot write '" << path.string() << "'\n";
      return false;
    }
    return true;
  };
  std::ostringstream csv;
  write_csv(csv, rows);
  if (!write_file(config.csv_out, csv.str()) ||
      !write_file(config.table_out, format_table(rows)))
    return 3;

  const bool failed = std::any_of(rows.begin(), rows.end(),
                                  [](const ResultRow& r) { return r.status == "error"; });
  return failed ? 1 : 0;
}

}  // namespace cssl::bench
