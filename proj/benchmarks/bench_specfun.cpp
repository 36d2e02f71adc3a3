#include <benchmark/benchmark.h>

#include "susyg/specfun.hpp"

using namespace susyg;

static void BM_pcf_d(benchmark::State& st) {
  const double nu = st.range(0) / 10.0;
  double z = -8.0;
  for (auto _ : st) {
    benchmark::DoNotOptimize(specfun::pcf_d(nu, z));
    z = z > 8.0 ? -8.0 : z + 0.37;
  }
}
BENCHMARK(BM_pcf_d)->Arg(-25)->Arg(5)->Arg(20);

static void BM_pcf_d_dnu(benchmark::State& st) {
  double z = -8.0;
  for (auto _ : st) {
    benchmark::DoNotOptimize(specfun::pcf_d_dnu(0.7, z));
    z = z > 8.0 ? -8.0 : z + 0.37;
  }
}
BENCHMARK(BM_pcf_d_dnu);

static void BM_hyp1f1(benchmark::State& st) {
  double x = -20.0;
  for (auto _ : st) {
    benchmark::DoNotOptimize(specfun::hyp1f1(-0.35, 0.5, x));
    x = x > 20.0 ? -20.0 : x + 0.9;
  }
}
BENCHMARK(BM_hyp1f1);

BENCHMARK_MAIN();
