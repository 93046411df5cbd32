#include <benchmark/benchmark.h>

#include <cmath>

#include "resonance/asymptotic.hpp"
#include "resonance/quadrature.hpp"
#include "resonance/rootfind.hpp"
#include "resonance/shooting.hpp"

using namespace resonance;

namespace {

Potential parabola() { return Potential::polynomial({0.0, 1.0, -1.0}); }

void BM_Action(benchmark::State& state) {
  const Potential v = parabola();
  double e = 1.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(action(v, e));
    e = e < 2.5 ? e + 1e-3 : 1.5;
  }
}
BENCHMARK(BM_Action);

void BM_ComplexPhase(benchmark::State& state) {
  const Potential v = parabola();
  for (auto _ : state) benchmark::DoNotOptimize(complex_phase_dz(v, 1.0, cplx(2.0, -0.05)));
}
BENCHMARK(BM_ComplexPhase);

void BM_OutgoingResidual(benchmark::State& state) {
  const Potential v = parabola();
  const double h = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(outgoing_residual(v, cplx(2.0, -0.05), h));
  state.SetLabel("h = 1/" + std::to_string(state.range(0)));
}
BENCHMARK(BM_OutgoingResidual)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMicrosecond);

void BM_WindingStepWell(benchmark::State& state) {
  const Potential v = Potential::constant(1.0);
  const double h = 0.02;
  const SpectralWindow w{2.0, 3.0, 2.0, h};
  for (auto _ : state)
    benchmark::DoNotOptimize(
        winding_number(w.rect(), [&](cplx z) { return outgoing_residual(v, z, h).value; }));
}
BENCHMARK(BM_WindingStepWell)->Unit(benchmark::kMillisecond);

void BM_PredictAll(benchmark::State& state) {
  const Asymptotics a(parabola(), {1.5, 2.5});
  for (auto _ : state) benchmark::DoNotOptimize(a.predict_all(0.005));
}
BENCHMARK(BM_PredictAll)->Unit(benchmark::kMicrosecond);

void BM_LocateParabola(benchmark::State& state) {
  const double h = 0.02;
  const Asymptotics a(parabola(), {1.5, 2.5});
  const SpectralWindow w{1.5, 2.5, a.default_depth_multiplier(h), h};
  for (auto _ : state) benchmark::DoNotOptimize(locate_all(w, parabola()));
}
BENCHMARK(BM_LocateParabola)->Unit(benchmark::kMillisecond)->Iterations(1);

}  // namespace

BENCHMARK_MAIN();
