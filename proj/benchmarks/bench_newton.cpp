#include <benchmark/benchmark.h>

#include "cssl/problems.hpp"
#include "cssl/ssn.hpp"

namespace {

struct Fixture {
  cssl::Problem problem;
  cssl::SubproblemContext ctx;
  cssl::InnerState state;
};

Fixture make_fixture(cssl::Index n) {
  cssl::GeneratorSpec spec;
  spec.n = n;
  spec.groups = n / 10;
  cssl::Vector truth;
  cssl::Problem base = cssl::generate(spec, &truth);
  cssl::Problem problem =
      base.with_penalty(cssl::lambda_settings(base.A(), base.b(), 1e-3, cssl::LambdaSetting::S1));
  // Multipliers near the planted signal give realistic active sets.
  cssl::SubproblemContext ctx{nullptr, truth, -problem.b(),
                              cssl::Vector::Zero(problem.m_ineq()), 1.0};
  Fixture f{std::move(problem), ctx, {}};
  f.ctx.problem = &f.problem;
  f.state = cssl::InnerState::evaluate(f.ctx, cssl::Vector::Constant(f.problem.m_hat(), 1e-2));
  return f;
}

void BM_NewtonSolve(benchmark::State& state) {
  const Fixture f = make_fixture(static_cast<cssl::Index>(state.range(0)));
  const auto strategy = static_cast<cssl::NewtonStrategy>(state.range(1));
  const cssl::NewtonSystem sys = f.state.newton_system(f.ctx, 1e-4);
  const cssl::Vector rhs = -f.state.grad();
  for (auto _ : state)
    benchmark::DoNotOptimize(cssl::solve_newton(sys, rhs, strategy, 1e-8));
  state.counters["width"] = static_cast<double>(sys.width());
}
BENCHMARK(BM_NewtonSolve)
    ->Args({2000, static_cast<int>(cssl::NewtonStrategy::Direct)})
    ->Args({2000, static_cast<int>(cssl::NewtonStrategy::Pcg)})
    ->Args({10000, static_cast<int>(cssl::NewtonStrategy::Direct)})
    ->Unit(benchmark::kMicrosecond);

void BM_EvaluateInnerState(benchmark::State& state) {
  const Fixture f = make_fixture(static_cast<cssl::Index>(state.range(0)));
  const cssl::Vector p = f.state.point();
  for (auto _ : state) benchmark::DoNotOptimize(cssl::InnerState::evaluate(f.ctx, p));
}
BENCHMARK(BM_EvaluateInnerState)->Arg(2000)->Arg(10000)->Unit(benchmark::kMicrosecond);

}  // namespace
