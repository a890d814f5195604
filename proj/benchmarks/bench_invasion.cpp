#include <benchmark/benchmark.h>

#include <vector>

#include "invasion/bridge_lab.hpp"
#include "invasion/feynman_kac.hpp"
#include "invasion/pde_solver.hpp"
#include "invasion/rng.hpp"
#include "invasion/travelling_wave.hpp"

using namespace invasion;

namespace {

const WaveProfile& wave() {
  static const WaveProfile w = compute_profile(1e-6, 50.0);
  return w;
}

}  // namespace

static void BM_PdeStep(benchmark::State& state) {
  const ScaledParams s = make_scaled(0.75, 0.1);
  const Grid g = Grid::make_window(static_cast<double>(state.range(0)), 0.05, 0.25, 100.0);
  FieldState st = initial_state(g, s, wave(), 0.0);
  Stepper stepper(s, g, BoundaryValues::standard(s));
  for (auto _ : state) {
    stepper.advance(st);
    benchmark::DoNotOptimize(st.w.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(g.n_cells));
}
BENCHMARK(BM_PdeStep)->Arg(200)->Arg(400);

static void BM_SampleBridge(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const BridgeSampler sampler(1.0, n);
  std::vector<double> z(n + 1);
  std::uint64_t path = 0;
  for (auto _ : state) {
    Philox rng(7, path++);
    sampler.sample(rng, z.data());
    benchmark::DoNotOptimize(z.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleBridge)->Arg(1000)->Arg(10000);

static void BM_FkPath(benchmark::State& state) {
  const ScaledParams s = make_scaled(0.75, 0.1);
  FkOptions o;
  o.n_paths = 1000;
  o.n_steps = static_cast<std::size_t>(state.range(0));
  o.workers = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fk_upper_estimate(10.0, 12.0, s, wave(), o).mean);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(o.n_paths));
}
BENCHMARK(BM_FkPath)->Arg(2000)->Unit(benchmark::kMillisecond);

static void BM_GTailExact(benchmark::State& state) {
  double q = 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(g_tail_exact(1.0, 0.7, 0.2, q));
    q = q < 0.98 ? q + 0.01 : 0.01;
  }
}
BENCHMARK(BM_GTailExact);

static void BM_OccupationTailExact(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(occupation_tail_exact(5.0, 0.3, 0.6, 0.0));
  }
}
BENCHMARK(BM_OccupationTailExact)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
