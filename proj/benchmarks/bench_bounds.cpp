// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <vector>

#include "boundlab/bounds.hpp"

using namespace boundlab::bounds;

static void BM_Theorem1Rhs(benchmark::State& state) {
  const TheoremQuery q{100000, 0.4, 1.2};
  for (auto _ : state) benchmark::DoNotOptimize(theorem1_rhs(q));
}
BENCHMARK(BM_Theorem1Rhs);

static void BM_Cor1Eval(benchmark::State& state) {
  const CorollaryQuery q{100000, 1.0, 0.5, Sign::plus};
  for (auto _ : state) benchmark::DoNotOptimize(cor1_eval(q, 0.45));
}
BENCHMARK(BM_Cor1Eval);

static void BM_Cor3Rhs(benchmark::State& state) {
  const MeanKnownQuery q{100000, 0.95, 1.0, Sign::minus};
  for (auto _ : state) benchmark::DoNotOptimize(cor3_rhs(q));
}
BENCHMARK(BM_Cor3Rhs);

static void BM_Rs13Rhs(benchmark::State& state) {
  std::vector<double> means(static_cast<std::size_t>(state.range(0)), 0.8);
  for (auto _ : state)
    benchmark::DoNotOptimize(rs13_rhs(means, 1.0, Sign::plus));
}
BENCHMARK(BM_Rs13Rhs)->Arg(100)->Arg(10000);

static void BM_InvertEpsilon(benchmark::State& state) {
  auto family = [](double eps) {
    return cor3_rhs({10000, 0.8, eps, Sign::plus});
  };
  for (auto _ : state)
    benchmark::DoNotOptimize(invert_epsilon(family, 1e-4));
}
BENCHMARK(BM_InvertEpsilon);

BENCHMARK_MAIN();
