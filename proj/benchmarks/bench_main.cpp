#include <benchmark/benchmark.h>

#include "nsfstab/evolution.hpp"
#include "nsfstab/functionals.hpp"
#include "nsfstab/scalar_lemmas.hpp"

using namespace nsfstab;

namespace {

Material water() {
  Material mat;
  mat.mu = 0.1;
  mat.kappa_ref = 418.0;
  return mat;
}

PerturbationState roll(const Grid& g, const SteadyState& s) {
  InitialPerturbation ip;
  ip.modes = {{1, 1, 1.0}};
  ip.peak_speed = 0.01;
  ip.bumps = {{0.5, 0.5, 0.2, 30.0}};
  return make_initial_state(g, s, ip);
}

void BM_Step(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Grid g(n, n, 1.0, 1.0);
  const Material mat = water();
  const SteadyState s = solve_steady_heat(g, mat, BoundaryProfile::sinusoidal_arc(300.0, 20.0));
  PerturbationState st = roll(g, s);
  const StepControl c;
  const double dt = stable_dt(st, s, mat, c);
  for (auto _ : state) {
    st = step(st, s, mat, c, dt);
    benchmark::DoNotOptimize(st.theta_tilde.values().data());
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_Step)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMicrosecond);

void BM_SteadySolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Grid g(n, n, 1.0, 1.0);
  const Material mat = water();
  for (auto _ : state) {
    const SteadyState s = solve_steady_heat(g, mat, BoundaryProfile::two_wall(280.0, 40.0), 1e-10);
    benchmark::DoNotOptimize(s.theta_hat_max());
  }
}
BENCHMARK(BM_SteadySolve)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_SampleFunctionals(benchmark::State& state) {
  const Grid g(64, 64, 1.0, 1.0);
  const Material mat = water();
  const SteadyState s = solve_steady_heat(g, mat, BoundaryProfile::sinusoidal_arc(300.0, 20.0));
  const PerturbationState st = roll(g, s);
  const ExponentPair pair(0.6, 0.9);
  for (auto _ : state) benchmark::DoNotOptimize(sample_functionals(st, s, mat, pair, {3.0, 4.0}).y_mn);
}
BENCHMARK(BM_SampleFunctionals)->Unit(benchmark::kMicrosecond);

void BM_Lemma9(benchmark::State& state) {
  const int l = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(lemma9_constant(3.0 / 8.0, 0.5, l, -5.0).inv_L);
}
BENCHMARK(BM_Lemma9)->Arg(3)->Arg(4)->Unit(benchmark::kMicrosecond);

void BM_Xcrit(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(xcrit_eq125());
}
BENCHMARK(BM_Xcrit)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
