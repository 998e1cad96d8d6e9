// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "boundlab/bounds.hpp"
#include "boundlab/simulate.hpp"

using namespace boundlab;
using namespace boundlab::sim;

static void BM_Generate(benchmark::State& state) {
  const auto spec = ProcessSpec::polya_like(1.0, 1.0);
  const long long n = state.range(0);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(generate(spec, n, ++seed));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_Generate)->Arg(100)->Arg(1000);

static void BM_EstimateTail(benchmark::State& state) {
  const auto spec = ProcessSpec::iid_bernoulli(0.5);
  const auto thr = bounds::theorem1_threshold({100, 0.0, 1.0});
  const auto bound = bounds::theorem1_rhs({100, 0.0, 1.0});
  for (auto _ : state)
    benchmark::DoNotOptimize(estimate_tail(spec, 100, 2000, thr, bound, 7,
                                           0.99, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_EstimateTail)->Arg(1)->Arg(4);

static void BM_EnumerateExact(benchmark::State& state) {
  const auto spec = ProcessSpec::two_point(0.9, 0.05);
  const long long n = state.range(0);
  const auto thr = bounds::theorem1_threshold({n, 0.5, 1.0});
  for (auto _ : state)
    benchmark::DoNotOptimize(enumerate_exact(spec, n, thr));
}
BENCHMARK(BM_EnumerateExact)->Arg(12)->Arg(16);

static void BM_CiUpper(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(ci_upper(17, 100000, 0.99));
}
BENCHMARK(BM_CiUpper);
