#include <benchmark/benchmark.h>

#include "susyg/bg.hpp"
#include "susyg/susy.hpp"

using namespace susyg;

static void BM_transform(benchmark::State& st) {
  const auto ctx = susy::SusyContext::make(1.0, 1.0, 0.7, 1.0);
  const Grid g(-12.0, 12.0, static_cast<int>(st.range(0)));
  const auto method = st.range(1) ? susy::WMethod::integral : susy::WMethod::differential;
  for (auto _ : st) {
    susy::Transform t(ctx, g, method);
    benchmark::DoNotOptimize(t.w().values.data());
  }
}
BENCHMARK(BM_transform)->Args({601, 0})->Args({2401, 0})->Args({601, 1})->Unit(benchmark::kMillisecond);

static void BM_eigenspinors(benchmark::State& st) {
  const auto ctx = susy::SusyContext::make(1.0, 1.0, 2.0, 1.0);
  susy::Transform t(ctx, Grid::standard());
  for (auto _ : st) benchmark::DoNotOptimize(bg::eigenspinors(t, 0, static_cast<int>(st.range(0))).size());
}
BENCHMARK(BM_eigenspinors)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
