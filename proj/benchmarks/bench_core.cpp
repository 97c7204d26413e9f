#include <benchmark/benchmark.h>

#include "rmdisk/bessel.hpp"
#include "rmdisk/config.hpp"
#include "rmdisk/lineal.hpp"
#include "rmdisk/normalform.hpp"
#include "rmdisk/presets.hpp"
#include "rmdisk/simulator.hpp"

using namespace rmdisk;

static void BM_BesselPrimeZeros(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(bessel_jprime_zeros(n, 10));
}
BENCHMARK(BM_BesselPrimeZeros)->Arg(0)->Arg(4)->Arg(12);

static void BM_ChiTauCurves(benchmark::State& state) {
  const RunConfig c = preset("fig1");
  const auto modes = mode_list(c.model.R, c.curves.n_max, c.curves.m_max);
  for (auto _ : state) {
    benchmark::DoNotOptimize(chi_tau_curves(c.model, modes, c.curves.chi_lo, c.curves.chi_hi, c.curves.samples));
  }
}
BENCHMARK(BM_ChiTauCurves)->Unit(benchmark::kMillisecond);

static void BM_SimulatorStep(benchmark::State& state) {
  const RunConfig c = preset("fig2");
  SimConfig sc = sim_config(c);
  sc.nr = static_cast<int>(state.range(0));
  sc.ntheta = 2 * sc.nr;
  sc.dt *= 64.0 / sc.nr;  // explicit taxis limit scales with the cell size
  sc.keep_frames = false;
  sc.t_end = 1e9;
  Simulator sim(c.model, sc);
  for (auto _ : state) sim.step();
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(sim.grid().size()));
  state.counters["rejected"] = static_cast<double>(sim.rejected_steps());
}
BENCHMARK(BM_SimulatorStep)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMicrosecond);

static void BM_NormalForm(benchmark::State& state) {
  const RunConfig c = preset("case1-consistent");
  const HopfPoint hp = hopf_points(c.model, steady_state(c.model), eigenmode(1, 1, c.model.R), 0).at(0);
  NormalFormOptions o;
  o.radial_modes = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(normal_form(c.model, hp, Branch::Standing, o).result.g21);
}
BENCHMARK(BM_NormalForm)->Arg(12)->Arg(24)->Arg(48)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
