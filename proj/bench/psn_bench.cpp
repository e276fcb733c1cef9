// Serial reference kernels against their OpenMP versions.
//
//   psn_bench --benchmark_filter=BlockSolves

#include <benchmark/benchmark.h>

#include <random>

#include "psn/kernels.hpp"
#include "psn/sampling.hpp"

using namespace psn;

namespace {

struct Problem {
  SymmetricMatrix m;
  Vector g;
  std::vector<IndexSet> sets;
};

Problem make_problem(std::size_t n, std::size_t tau, std::size_t c) {
  std::mt19937_64 eng(1);
  std::normal_distribution<double> normal;
  Vector g(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < g.size(); ++i) g(i) = normal(eng);
  SeedStream stream(2);
  return {make_heat_matrix(n), g, draw(SamplingScheme(SamplingKind::parallel_nice, n, tau, c), stream).sets};
}

void BlockSolvesSerial(benchmark::State& state) {
  const Problem p = make_problem(2000, static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::block_solves(p.m, p.sets, p.g));
}

void BlockSolvesOmp(benchmark::State& state) {
  const Problem p = make_problem(2000, static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::omp::block_solves(p.m, p.sets, p.g));
  state.counters["threads"] = kernels::threads();
}

std::vector<IndexSet> all_sets(std::size_t n, std::size_t tau) {
  return enumerate_sets(SamplingScheme(SamplingKind::nice, n, tau));
}

void LiftedInversesSerial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const SymmetricMatrix m = make_rho_matrix(n, 0.5);
  const auto sets = all_sets(n, 3);
  for (auto _ : state) {
    Matrix sum = Matrix::Zero(m.dense().rows(), m.dense().cols());
    kernels::serial::accumulate_lifted_inverses(m, sets, sum);
    benchmark::DoNotOptimize(sum.data());
  }
}

void LiftedInversesOmp(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const SymmetricMatrix m = make_rho_matrix(n, 0.5);
  const auto sets = all_sets(n, 3);
  for (auto _ : state) {
    Matrix sum = Matrix::Zero(m.dense().rows(), m.dense().cols());
    kernels::omp::accumulate_lifted_inverses(m, sets, sum);
    benchmark::DoNotOptimize(sum.data());
  }
  state.counters["threads"] = kernels::threads();
}

}  // namespace

BENCHMARK(BlockSolvesSerial)->Args({5, 8})->Args({20, 8})->Args({50, 32});
BENCHMARK(BlockSolvesOmp)->Args({5, 8})->Args({20, 8})->Args({50, 32});
BENCHMARK(LiftedInversesSerial)->Arg(16)->Arg(32);
BENCHMARK(LiftedInversesOmp)->Arg(16)->Arg(32);

BENCHMARK_MAIN();
