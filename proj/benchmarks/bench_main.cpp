#include <benchmark/benchmark.h>

#include "asep/pde.hpp"
#include "asep/rate_tree.hpp"
#include "asep/sim.hpp"

namespace {

asep::ModelParams model(int n) {
  asep::ModelParams m;
  m.n = n;
  m.sigma = 0.1;
  m.kappa = 0.75;
  m.theta = -0.5;
  return m;
}

void BM_RateTreeSetSelect(benchmark::State& state) {
  const auto n = std::size_t(state.range(0));
  asep::RateTree tree(n);
  asep::RngStream rng(1, 0);
  for (std::size_t i = 0; i < n; ++i) tree.set(i, rng.uniform());
  for (auto _ : state) {
    const auto i = tree.select(rng.uniform() * tree.total());
    tree.set(i, rng.uniform());
    benchmark::DoNotOptimize(i);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_RateTreeSetSelect)->RangeMultiplier(8)->Range(64, 1 << 18);

// one exact CTMC event on a half-filled lattice
void BM_SimulatorStep(benchmark::State& state) {
  const int n = int(state.range(0));
  asep::RngStream rng(2, 0);
  const auto initial = asep::sample_initial(asep::Profile::step(0.5), n, rng);
  asep::Simulator sim(model(n), asep::RateSchedule(asep::Rates{1, 1, 1, 1}), initial, asep::RngStream(2, 1));
  const double inf = std::numeric_limits<double>::infinity();
  for (auto _ : state) benchmark::DoNotOptimize(sim.step(inf));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SimulatorStep)->RangeMultiplier(4)->Range(256, 16384);

// 100 Godunov steps; items are cell updates
void BM_GodunovSweep(benchmark::State& state) {
  const int cells = int(state.range(0));
  asep::Grid g;
  g.cells = cells;
  g.dt = 0.9 * asep::godunov_stable_dt(g.dx(), 1.0);
  g.frames = 1;
  g.T = 100 * g.dt;
  const asep::BoundaryData bd{asep::Profile::sine(0.3), asep::ScalarSchedule(0.2), asep::ScalarSchedule(0.9)};
  for (auto _ : state) benchmark::DoNotOptimize(asep::solve_entropy(bd, 1.0, g));
  state.SetItemsProcessed(state.iterations() * 100 * cells);
}
BENCHMARK(BM_GodunovSweep)->Arg(400)->Arg(1600)->Arg(6400);

}  // namespace

BENCHMARK_MAIN();
