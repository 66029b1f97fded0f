// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cssl/admm.hpp"
#include "cssl/alm.hpp"
#include "cssl/bench/run.hpp"
#include "cssl/kkt.hpp"
#include "cssl/newton_system.hpp"
#include "cssl/problems.hpp"
#include "cssl/prox.hpp"
#include "cssl/ssn.hpp"
#include "newton_fixture.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace cssl;
using testing_support::random_groups;
using testing_support::random_vector;
using testing_support::uniform;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

double rel(double diff, double ref) { return ref > 0.0 ? diff / ref : diff; }

Outcome prox_correctness() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(101);
  double worst_h = 0.0, worst_p = 0.0;
  for (int t = 0; t < 200; ++t) {
    const Index n = 1 + static_cast<Index>(rng() % 64);
    const double sigma = uniform(rng, 0.05, 5.0);
    const Vector u = random_vector(rng, n, uniform(rng, 0.2, 4.0));
    worst_h = std::max(worst_h, (prox_h(u, sigma) - oracle::prox_norm(u, sigma))
                                    .lpNorm<Eigen::Infinity>());

    const auto g = random_groups(rng, n, 1 + static_cast<Index>(rng() % std::min<Index>(n, 8)));
    const PenaltyParams params{uniform(rng, 0.0, 1.0), uniform(rng, 0.0, 1.0)};
    const Vector ref = oracle::prox_sparse_group(u, sigma, testing_support::oracle_groups(g),
                                                 g.weights(), params.lambda1, params.lambda2);
    worst_p = std::max(worst_p, (prox_p(u, sigma, g, params).result - ref)
                                    .lpNorm<Eigen::Infinity>());
  }
  const double secs = seconds_since(t0);
  return {worst_h <= 1e-7 && worst_p <= 1e-7 && secs < 60.0,
          fmt("200 instances, max err h %.2e p %.2e, %.1f s", worst_h, worst_p, secs)};
}

Outcome moreau_identity() {
  std::mt19937_64 rng(202);
  double worst_h = 0.0, worst_p = 0.0;
  for (int t = 0; t < 500; ++t) {
    const Index n = 1 + static_cast<Index>(rng() % 40);
    const double s = uniform(rng, 0.05, 5.0);
    const Vector x = random_vector(rng, n, 2.0);
    const Vector rh = prox_h(x, s) + s * prox_h_conjugate(x / s, s) - x;
    worst_h = std::max(worst_h, rh.lpNorm<Eigen::Infinity>());
    const auto g = random_groups(rng, n, 1 + static_cast<Index>(rng() % std::min<Index>(n, 6)));
    const PenaltyParams params{uniform(rng, 0.0, 1.0), uniform(rng, 0.0, 1.0)};
    const Vector rp =
        prox_p(x, s, g, params).result + s * prox_p_conjugate(x / s, s, g, params) - x;
    worst_p = std::max(worst_p, rp.lpNorm<Eigen::Infinity>());
  }
  return {worst_h <= 1e-13 && worst_p <= 1e-13,
          fmt("500 points, max residual h %.2e p %.2e", worst_h, worst_p)};
}

Outcome jacobian_consistency() {
  std::mt19937_64 rng(303);
  const double h = 1e-6;
  double jh = 0.0, jp = 0.0, jo = 0.0, gphi = 0.0, hd = 0.0;

  for (int t = 0; t < 50; ++t) {
    const Index n = 2 + static_cast<Index>(rng() % 20);
    const Vector u = random_vector(rng, n, 2.0);
    const double sigma = u.norm() * (t % 5 == 0 ? uniform(rng, 1.2, 2.0) : uniform(rng, 0.1, 0.8));
    const auto jac = jacobian_prox_h(u, sigma);
    const Matrix fd = oracle::finite_diff_jacobian(
        [&](const Vector& x) { return prox_h(x, sigma); }, u, h);
    const Matrix dense = oracle::materialize([&](const Vector& d) { return jac.apply(d); },
                                             static_cast<int>(n));
    jh = std::max(jh, rel((dense - fd).norm(), fd.norm()));
  }

  for (int t = 0; t < 50;) {
    const Index n = 4 + static_cast<Index>(rng() % 40);
    const auto g = random_groups(rng, n, 1 + static_cast<Index>(rng() % std::min<Index>(n, 6)));
    const PenaltyParams params{uniform(rng, 0.05, 0.5), uniform(rng, 0.05, 0.5)};
    const double sigma = uniform(rng, 0.3, 2.0);
    const Vector u = random_vector(rng, n, 1.5);
    if (oracle::sparse_group_kink_distance(u, sigma, testing_support::oracle_groups(g),
                                           g.weights(), params.lambda1, params.lambda2) < 1e-3)
      continue;
    ++t;
    const auto jac = jacobian_prox_p(u, sigma, g, params);
    const Matrix fd = oracle::finite_diff_jacobian(
        [&](const Vector& x) { return prox_p(x, sigma, g, params).result; }, u, h);
    const Matrix dense = oracle::materialize([&](const Vector& d) { return jac.apply(d); },
                                             static_cast<int>(n));
    jp = std::max(jp, rel((dense - fd).norm(), fd.norm()));
  }

  for (int t = 0; t < 50;) {
    const Vector u = random_vector(rng, 1 + static_cast<Index>(rng() % 30));
    if (u.cwiseAbs().minCoeff() < 1e-3) continue;
    ++t;
    const Matrix fd = oracle::finite_diff_jacobian(project_orthant, u, h);
    const Matrix dense = jacobian_orthant(u).asDiagonal();
    jo = std::max(jo, rel((dense - fd).norm(), fd.norm()));
  }

  for (int t = 0; t < 50; ++t) {
    auto f = testing_support::make_inner_fixture(rng, 4 + t % 5, 12 + t % 20, t % 3, 1 + t % 3,
                                                 1 + t % 4);
    const Vector g = eval_grad_phi(f.point, f.ctx);
    const Vector fd = oracle::finite_diff_gradient(
        [&](const Vector& p) { return eval_phi(p, f.ctx); }, f.point, h);
    gphi = std::max(gphi, rel((g - fd).norm(), fd.norm()));

    const auto state = InnerState::evaluate(f.ctx, f.point);
    const NewtonSystem sys = state.newton_system(f.ctx, 0.0);
    const Vector d = random_vector(rng, f.problem.m_hat());
    const Vector fdh = (eval_grad_phi(f.point + h * d, f.ctx) -
                        eval_grad_phi(f.point - h * d, f.ctx)) / (2.0 * h);
    hd = std::max(hd, rel((sys.apply_unregularized(d) - fdh).norm(), fdh.norm()));
  }

  const bool ok = jh <= 1e-4 && jp <= 1e-4 && jo <= 1e-4 && gphi <= 1e-5 && hd <= 1e-4;
  return {ok, fmt("50 points each, rel err prox_h %.1e prox_p %.1e orthant %.1e grad %.1e Hd %.1e",
                  jh, jp, jo, gphi, hd)};
}

Outcome low_rank_equivalence() {
  std::mt19937_64 rng(404);
  double worst = 0.0;
  bool widths = true;
  Index max_width = 0;
  for (int t = 0; t < 20; ++t) {
    const Index n = 20 + static_cast<Index>(rng() % 41);
    auto f = testing_support::make_inner_fixture(rng, 6 + t % 5, n, 1 + t % 3, 1 + t % 2,
                                                 2 + t % 6);
    const auto state = InnerState::evaluate(f.ctx, f.point);
    const NewtonSystem sys = state.newton_system(f.ctx, 0.0);
    const Matrix N(f.problem.stacked());
    const double s = f.ctx.sigma;
    const auto jp = jacobian_prox_p(f.ctx.x - s * (N.transpose() * f.point), s,
                                    f.problem.groups(), f.problem.penalty());
    const Matrix V2 = oracle::materialize([&](const Vector& d) { return jp.apply(d); },
                                          static_cast<int>(n));
    const Matrix& D = sys.low_rank();
    worst = std::max(worst, (s * N * V2 * N.transpose() - s * D * D.transpose())
                                .lpNorm<Eigen::Infinity>());
    const auto active = build_active_sets(jp.v, jp.theta, s, f.problem.groups(),
                                          f.problem.penalty());
    widths = widths && D.cols() == active.r + active.r2;
    max_width = std::max(max_width, D.cols());
  }
  return {worst <= 1e-10 && widths,
          fmt("20 instances, max entry diff %.2e, width = r + r2 %s (max %ld)", worst,
              widths ? "holds" : "violated", static_cast<long>(max_width))};
}

struct E2eCell {
  std::string label;
  Problem problem;
  SolveResult ssnal;
  double ssnal_seconds;
};

std::vector<E2eCell>& e2e_cells() {
  static std::vector<E2eCell> cells;
  return cells;
}

Outcome end_to_end() {
  int failures = 0;
  int min_iter = 1 << 30, max_iter = 0;
  double max_eta = 0.0, max_secs = 0.0;
  std::string first_failure;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    GeneratorSpec spec;
    spec.seed = seed;
    const Problem base = generate(spec);
    for (LambdaSetting setting : {LambdaSetting::S1, LambdaSetting::S2}) {
      for (double gamma : {1e-2, 1e-3, 1e-4}) {
        Problem p = base.with_penalty(lambda_settings(base.A(), base.b(), gamma, setting));
        AlmParams params;
        params.tol = 1e-6;
        params.max_outer = 200;
        params.time_cap_seconds = 120.0;
        const auto t0 = Clock::now();
        SolveResult res = alm_solve(p, params, SsnParams{});
        const double secs = seconds_since(t0);
        const int it = res.report.outer_iterations;
        const double eta = res.report.final.eta;
        const bool ok = eta < 1e-6 && it <= 200 && secs <= 120.0 && it >= 5 && it <= 100;
        if (!ok) {
          ++failures;
          if (first_failure.empty())
            first_failure = fmt("; first failure seed %lu %s gamma %.0e: eta %.2e iter %d %.1f s",
                                static_cast<unsigned long>(seed), to_string(setting), gamma, eta,
                                it, secs);
        }
        min_iter = std::min(min_iter, it);
        max_iter = std::max(max_iter, it);
        max_eta = std::max(max_eta, eta);
        max_secs = std::max(max_secs, secs);
        std::string label = fmt("seed %lu %s gamma %.0e", static_cast<unsigned long>(seed),
                                to_string(setting), gamma);
        e2e_cells().push_back({std::move(label), std::move(p), std::move(res), secs});
      }
    }
  }
  return {failures == 0,
          fmt("60 cells, %d failing, outer iter %d..%d, max eta %.2e, max %.1f s%s", failures,
              min_iter, max_iter, max_eta, max_secs, first_failure.c_str())};
}

Outcome cross_agreement() {
  if (e2e_cells().empty()) return {false, "end-to-end cells missing"};
  int compared = 0, skipped = 0, failures = 0;
  double worst = 0.0;
  for (const auto& cell : e2e_cells()) {
    AdmmParams params;
    params.tol = 1e-6;
    params.max_iterations = 10000;
    const auto res = admm_solve(cell.problem, params);
    if (!(res.report.final.eta < 1e-6) || res.report.outer_iterations > 10000) {
      ++skipped;
      continue;
    }
    ++compared;
    const double ps = cell.ssnal.report.final.pobj;
    const double d = std::abs(ps - res.report.final.pobj) / (1.0 + std::abs(ps));
    worst = std::max(worst, d);
    if (!(d <= 1e-4)) ++failures;
  }
  return {failures == 0 && compared > 0,
          fmt("%d compared, %d skipped (ADMM not converged), max rel pobj diff %.2e", compared,
              skipped, worst)};
}

Outcome kkt_zero_oracle() {
  std::mt19937_64 rng(505);
  double worst = 0.0;
  for (int t = 0; t < 10; ++t) {
    const Index m = 10, n = 40, mE = 3, mI = 4;
    const Matrix A = testing_support::random_matrix(rng, m, n);
    const Vector b = random_vector(rng, m);
    const Vector cI = -random_vector(rng, mI).cwiseAbs() - Vector::Constant(mI, 0.1);
    const double bound = (A.transpose() * b).lpNorm<Eigen::Infinity>() / b.norm();
    const Problem p(sparse_from_dense(A), b,
                    sparse_from_dense(testing_support::random_matrix(rng, mE, n)),
                    Vector::Zero(mE), sparse_from_dense(testing_support::random_matrix(rng, mI, n)),
                    cI, GroupPartition::contiguous(n, 8),
                    PenaltyParams{uniform(rng, 0.0, 1.0), uniform(rng, 1.1, 3.0) * bound});
    PrimalDualPoint pt = PrimalDualPoint::zeros(p);
    pt.y = -b;
    pt.u = -b / b.norm();
    pt.w = pt.u;
    pt.s = A.transpose() * b / b.norm();
    pt.z = cI;
    worst = std::max(worst, compute_kkt_residuals(pt, p).eta);
  }
  return {worst <= 1e-10, fmt("10 manufactured instances, max eta %.2e", worst)};
}

Outcome superlinear_tail() {
  std::mt19937_64 rng(3);
  auto f = testing_support::make_inner_fixture(rng, 5, 20, 0, 0, 1);
  const auto res = ssn_minimize(f.ctx, Vector::Zero(f.problem.m_hat()), SsnParams{},
                                [](const InnerState& s) { return s.grad_norm() <= 1e-12; });
  const auto& g = res.report.grad_norms;
  if (g.size() < 3) return {false, fmt("only %zu gradient norms recorded", g.size())};
  double worst = 0.0;
  for (std::size_t j = g.size() - 3; j + 1 < g.size(); ++j)
    worst = std::max(worst, g[j + 1] / std::pow(g[j], 1.2));
  std::ostringstream tail;
  for (std::size_t j = g.size() - 3; j < g.size(); ++j) tail << ' ' << fmt("%.1e", g[j]);
  return {worst <= 10.0, fmt("last norms%s, max ratio C = %.2e", tail.str().c_str(), worst)};
}

Outcome determinism() {
  const auto root = std::filesystem::temp_directory_path() / "cssl_acceptance_det";
  std::string text[2];
  for (int r = 0; r < 2; ++r) {
    const auto dir = root / std::to_string(r);
    std::filesystem::create_directories(dir);
    bench::RunConfig c;
    c.solver = bench::SolverChoice::Both;
    c.generator.m = 40;
    c.generator.n = 400;
    c.generator.m_eq = 6;
    c.generator.m_ineq = 6;
    c.generator.groups = 40;
    c.generator.seed = 9;
    c.gammas = {1e-2, 1e-3};
    c.max_admm = 2000;
    c.deterministic = true;
    c.csv_out = dir / "results.csv";
    c.table_out = dir / "results.txt";
    std::ostringstream log;
    if (bench::run(c, log) != 0) return {false, "run failed"};
    std::ifstream in(c.csv_out, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    text[r] = ss.str();
  }
  std::filesystem::remove_all(root);
  const bool same = !text[0].empty() && text[0] == text[1];
  return {same, fmt("two runs, %zu bytes, %s", text[0].size(), same ? "identical" : "differ")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"prox-correctness", prox_correctness},
      {"moreau-identity", moreau_identity},
      {"jacobian-consistency", jacobian_consistency},
      {"low-rank-equivalence", low_rank_equivalence},
      {"end-to-end-convergence", end_to_end},
      {"solver-cross-agreement", cross_agreement},
      {"kkt-zero-oracle", kkt_zero_oracle},
      {"superlinear-tail", superlinear_tail},
      {"determinism", determinism},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome out;
    try {
      out = check();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    failed += out.pass ? 0 : 1;
    std::printf("%s %-24s %s\n", out.pass ? "PASS" : "FAIL", name, out.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
