#include <benchmark/benchmark.h>

#include "susyg/coherent.hpp"
#include "susyg/dynamics.hpp"

using namespace susyg;

static void BM_bgcs(benchmark::State& st) {
  const auto ctx = susy::SusyContext::make(1.0, 1.0, 2.0, 1.0);
  const auto spec = coherent::make_ladder(ctx, coherent::LadderKind::diagonal);
  const double r = static_cast<double>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(coherent::bgcs(spec, ctx, std::polar(r, 0.3)).size());
}
BENCHMARK(BM_bgcs)->Arg(1)->Arg(10);

static void BM_cs_observables(benchmark::State& st) {
  const auto ctx = susy::SusyContext::make(1.0, 1.0, 2.0, 1.0);
  susy::Transform t(ctx, Grid::standard());
  const auto cs = coherent::bgcs(coherent::make_ladder(ctx, coherent::LadderKind::diagonal), ctx, 2.0);
  coherent::LevelTable table(t, cs.K, coherent::significant_terms(cs.coeffs));
  for (auto _ : st) benchmark::DoNotOptimize(table.observables(cs.coeffs).rho.data());
}
BENCHMARK(BM_cs_observables)->Unit(benchmark::kMillisecond);

static void BM_fidelity_series(benchmark::State& st) {
  const auto ctx = susy::SusyContext::make(1.0, 1.0, 1.0 / 3, 1.0);
  const auto cs = coherent::standard_cs(5.0);
  std::vector<double> ts(601);
  for (size_t i = 0; i < ts.size(); ++i) ts[i] = 0.01 * i;
  for (auto _ : st) benchmark::DoNotOptimize(dynamics::fidelity_series(ctx, cs, ts).data());
}
BENCHMARK(BM_fidelity_series);

BENCHMARK_MAIN();
