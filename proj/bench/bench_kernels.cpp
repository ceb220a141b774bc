#include <benchmark/benchmark.h>

#include <random>

#include "qkt/frobenius.hpp"
#include "qkt/random.hpp"

using namespace qkt;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(0) == 0 ? Exec::serial : Exec::parallel; }

SeriesMatrix dense_random(std::mt19937_64& rng, std::size_t dim, const VariableSet& vars, const Truncation& tr) {
  SeriesMatrix m(dim, vars, tr);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) m.set(i, j, random_series(rng, vars, tr, 30));
  return m;
}

void BM_Multiply(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const VariableSet vars{3, 1, false};
  const Truncation tr{6, 3, 0};
  const SeriesMatrix a = dense_random(rng, 4, vars, tr), b = dense_random(rng, 4, vars, tr);
  for (auto _ : state) benchmark::DoNotOptimize(multiply(a, b, exec_of(state)));
}

void BM_InverseGeometric(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const VariableSet vars{2, 1, false};
  const SeriesMatrix G = random_perturbed_metric(rng, 3, vars, {6, 3, 0});
  for (auto _ : state) benchmark::DoNotOptimize(matrix_inverse_geometric(G, exec_of(state)));
}

void BM_FrobeniusCheck(benchmark::State& state) {
  const FrobeniusData fd = build_frobenius(assemble_potential(CorrelatorTable(Target::projective(3), 1), 7, 0));
  for (auto _ : state) benchmark::DoNotOptimize(frobenius_check(fd, exec_of(state)));
}

}  // namespace

// Argument 0 runs the serial reference, 1 the OpenMP kernel.
BENCHMARK(BM_Multiply)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_InverseGeometric)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FrobeniusCheck)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
