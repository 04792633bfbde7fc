#include "lk/operator.hpp"
#include "lk/solver.hpp"

#include <benchmark/benchmark.h>

using namespace lk;

namespace {

geometry::DiscreteProblem torus(Index n) {
  return geometry::discretize(geometry::analytic_pair(geometry::ProblemId::torus), n, {});
}

geometry::DiscreteProblem interval(Index n) {
  return geometry::discretize(geometry::analytic_pair(geometry::ProblemId::bvp1d), n, {});
}

}  // namespace

static void BM_Knn(benchmark::State& state) {
  const auto d = torus(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kernel::build_knn_graph(d.cloud, 128));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Knn)->Arg(1600)->Arg(3600)->Arg(6400)->Unit(benchmark::kMillisecond)->Complexity();

static void BM_KernelAssembly(benchmark::State& state) {
  const auto d = torus(state.range(0));
  const auto pattern = kernel::build_knn_graph(d.cloud, 128);
  for (auto _ : state) benchmark::DoNotOptimize(kernel::assemble_kernel_matrix(d.cloud, d.coeffs, 0.0024, pattern));
}
BENCHMARK(BM_KernelAssembly)->Arg(1600)->Arg(6400)->Unit(benchmark::kMillisecond);

static void BM_BuildOperatorDebiased(benchmark::State& state) {
  const auto d = torus(state.range(0));
  const auto pattern = kernel::build_knn_graph(d.cloud, 128);
  const kernel::KernelConfig cfg{0.0024, 0.0179, 128, true};
  for (auto _ : state) benchmark::DoNotOptimize(op::build_operator(d.cloud, d.coeffs, cfg, true, pattern));
}
BENCHMARK(BM_BuildOperatorDebiased)->Arg(1600)->Arg(6400)->Unit(benchmark::kMillisecond);

static void BM_DirectSolve(benchmark::State& state) {
  const auto d = interval(state.range(0));
  const auto s = op::build_operator(d.cloud, d.coeffs, {2e-6, 2e-6, 100, true}, false);
  for (auto _ : state) benchmark::DoNotOptimize(solver::solve_direct({&s, d.shift, d.rhs}));
}
BENCHMARK(BM_DirectSolve)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

static void BM_MinNormLsqr(benchmark::State& state) {
  const auto d = torus(state.range(0));
  const auto s = op::build_operator(d.cloud, d.coeffs, {0.0024, 0.0179, 128, true}, true);
  for (auto _ : state) benchmark::DoNotOptimize(solver::solve_min_norm({&s, d.shift, d.rhs}));
}
BENCHMARK(BM_MinNormLsqr)->Arg(1600)->Arg(6400)->Unit(benchmark::kMillisecond);

static void BM_TuneGaussianAllPairs(benchmark::State& state) {
  const auto cloud = geometry::circle_grid(state.range(0));
  const auto grid = op::default_tuning_grid();
  for (auto _ : state) benchmark::DoNotOptimize(op::tune_bandwidth_gaussian(cloud, grid));
}
BENCHMARK(BM_TuneGaussianAllPairs)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
