// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "boundlab/certify.hpp"

using namespace boundlab::certify;

static void BM_GValue(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(g_value(GPoint{1.3, 0.4, 2.7}));
}
BENCHMARK(BM_GValue);

static void BM_GValueSmallZ(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(g_value(GPoint{1.3, 0.4, 5e-5}));
}
BENCHMARK(BM_GValueSmallZ);

static void BM_Z0Solve(benchmark::State& state) {
  double y = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(z0_solve(y));
    y = y < 2.9 ? y + 0.1 : 0.1;  // vary the root location
  }
}
BENCHMARK(BM_Z0Solve);

static void BM_GradAlongCurve(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(grad_along_curve(0.37, 0.8));
}
BENCHMARK(BM_GradAlongCurve);

static void BM_ChernoffStep(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(chernoff_step(2.5, 0.7));
}
BENCHMARK(BM_ChernoffStep);

static void BM_CertifyGrid(benchmark::State& state) {
  CertGridSpec spec;
  spec.y_min = -0.49;
  spec.y_max = 1.0;
  spec.y_step = 0.02;
  spec.x_span = 2.0;
  spec.x_step = 0.02;
  spec.threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(certify_grid(spec));
}
BENCHMARK(BM_CertifyGrid)->Arg(1)->Arg(4);
