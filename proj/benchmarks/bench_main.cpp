#include <benchmark/benchmark.h>

#include "uvm/hjb.hpp"
#include "uvm/rng.hpp"
#include "uvm/sde.hpp"

namespace {

using namespace uvm;

const auto kFly = PiecewiseLinearPayoff::butterfly(90, 100, 110);

void BM_SolveHjb2d(benchmark::State& state) {
  const ModelParams p = reference_params(0.2);
  const GridSpec g = with_admissible_time_steps(
      p, GridSpec({.x_min = 40, .x_max = 160, .n_x = static_cast<std::size_t>(state.range(0)),
                   .v_min = -2.5, .v_max = 0.5, .n_v = 21}));
  for (auto _ : state) benchmark::DoNotOptimize(solve_hjb_2d(p, kFly, g).value_at_start(100, -1));
  state.counters["n_t"] = static_cast<double>(g.n_t());
  state.counters["node_steps/s"] = benchmark::Counter(
      static_cast<double>(g.nx_total() * g.n_v() * g.n_t()), benchmark::Counter::kIsIterationInvariantRate);
}
BENCHMARK(BM_SolveHjb2d)->Arg(59)->Arg(119)->Unit(benchmark::kMillisecond);

void BM_SolveBsb1d(benchmark::State& state) {
  const ModelParams p = reference_params(0.0);
  const GridSpec g = with_admissible_time_steps(p, GridSpec(GridSpec::Values{}), StabilityScope::kXOnly);
  for (auto _ : state) benchmark::DoNotOptimize(solve_bsb_1d(p, kFly, g).value_at_start(100, -1));
}
BENCHMARK(BM_SolveBsb1d)->Unit(benchmark::kMillisecond);

void BM_CounterNormals(benchmark::State& state) {
  const CounterNormals rng(42);
  std::uint64_t path = 0;
  for (auto _ : state) benchmark::DoNotOptimize(rng.pair(path++, 3));
  state.SetItemsProcessed(state.iterations() * 2);
}
BENCHMARK(BM_CounterNormals);

void BM_SimulatePaths(benchmark::State& state) {
  const ModelParams p = reference_params(0.2);
  FixedVolatility f(0.2);
  const SimulationSpec spec{.n_paths = static_cast<std::size_t>(state.range(0)), .n_steps = 150};
  for (auto _ : state) benchmark::DoNotOptimize(estimate_payoff(p, kFly, spec, f).mean);
  state.SetItemsProcessed(state.iterations() * state.range(0) * 150);
}
BENCHMARK(BM_SimulatePaths)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
