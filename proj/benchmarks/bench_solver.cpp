#include <benchmark/benchmark.h>

#include <robust_merton/robust_merton.hpp>

using namespace robust_merton;

namespace {

RobustProblem random_problem(int d, std::uint64_t seed) {
  RandomStream rng(seed);
  Matrix sigma(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) sigma(i, j) = 0.1 * rng.normal();
    sigma(i, i) += 0.3;
  }
  Matrix b(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) b(i, j) = 0.3 * rng.normal();
  }
  Vector nu(d);
  for (int i = 0; i < d; ++i) nu(i) = 0.1 + 0.2 * rng.uniform();
  return prepare_problem(MarketModel(sigma, 0.01, 1.0, 1.0), InvestorProfile(-1.0, 1.0),
                         UncertaintySet(nu, b * b.transpose() + Matrix::Identity(d, d), 0.5));
}

void BM_PrepareProblem(benchmark::State& state) {
  const auto p = random_problem(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(prepare_problem(p.market, p.profile, p.uncertainty));
  }
}
BENCHMARK(BM_PrepareProblem)->Arg(8)->Arg(50);

void BM_SolveRobust(benchmark::State& state) {
  const auto p = random_problem(static_cast<int>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(solve_robust(p));
}
BENCHMARK(BM_SolveRobust)->Arg(8)->Arg(50);

void BM_SolvePsi(benchmark::State& state) {
  const auto p = random_problem(static_cast<int>(state.range(0)), 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_psi(p.spectral, p.geometry, p.profile, p.uncertainty.nu(), 0.5));
  }
}
BENCHMARK(BM_SolvePsi)->Arg(8)->Arg(50);

void BM_SimulateWealth(benchmark::State& state) {
  const auto p = random_problem(8, 4);
  const RobustSolution sol = solve_robust(p);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_terminal_wealth(p.market, sol.pi_star, sol.mu_star, n, 7, 1));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_SimulateWealth)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
