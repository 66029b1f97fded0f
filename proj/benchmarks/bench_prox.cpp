#include <benchmark/benchmark.h>

#include <random>

#include "cssl/prox.hpp"

namespace {

cssl::Vector random_vector(cssl::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  cssl::Vector v(n);
  for (auto& x : v) x = g(rng);
  return v;
}

void BM_ProxP(benchmark::State& state) {
  const auto n = static_cast<cssl::Index>(state.range(0));
  const auto groups = cssl::GroupPartition::contiguous(n, n / 10);
  const cssl::PenaltyParams params{0.1, 0.3};
  const cssl::Vector u = random_vector(n, 1);
  for (auto _ : state) benchmark::DoNotOptimize(cssl::prox_p(u, 1.0, groups, params));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_ProxP)->Arg(2000)->Arg(20000);

void BM_JacobianProxP(benchmark::State& state) {
  const auto n = static_cast<cssl::Index>(state.range(0));
  const auto groups = cssl::GroupPartition::contiguous(n, n / 10);
  const cssl::PenaltyParams params{0.1, 0.3};
  const cssl::Vector u = random_vector(n, 2);
  const cssl::Vector d = random_vector(n, 3);
  const auto jac = cssl::jacobian_prox_p(u, 1.0, groups, params);
  for (auto _ : state) benchmark::DoNotOptimize(jac.apply(d));
}
BENCHMARK(BM_JacobianProxP)->Arg(2000)->Arg(20000);

}  // namespace
