#include <benchmark/benchmark.h>

#include <cmath>

#include "lubstep/drag.hpp"
#include "lubstep/integrators.hpp"

using namespace lubstep;

namespace {

void BM_EulerStep(benchmark::State& state) {
  const OdeProblem p = wall_rebound_problem(1e-3);
  SimState s{0.5, 1e-3, -0.1};
  for (auto _ : state) benchmark::DoNotOptimize(euler_step(s, p, 1e-3, 0.501));
}
BENCHMARK(BM_EulerStep);

void BM_ImplicitStepDisk(benchmark::State& state) {
  const OdeProblem p = wall_rebound_problem(1e-3);
  SimState s{0.5, 1e-3, -0.1};
  for (auto _ : state) benchmark::DoNotOptimize(implicit_step(s, p, 1e-3, 0.501));
}
BENCHMARK(BM_ImplicitStepDisk);

void BM_ThresholdRun(benchmark::State& state) {
  const OdeProblem p = wall_rebound_problem(1e-3);
  const double dt = 1.0 / static_cast<double>(state.range(0));
  const double q_s = threshold_from_step(p.drag, dt, 20.0);
  for (auto _ : state) benchmark::DoNotOptimize(run_algorithm2(p, dt, q_s));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(4.0 / dt));
}
BENCHMARK(BM_ThresholdRun)->Arg(100)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_AdaptiveRun(benchmark::State& state) {
  const OdeProblem p = wall_rebound_problem(1e-3);
  const double dt_min = state.range(0) == 0 ? 0.0 : 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_algorithm3(p, 1e-5, 1e-3, dt_min));
}
BENCHMARK(BM_AdaptiveRun)->Arg(0)->Arg(10000)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_ReferenceSolve(benchmark::State& state) {
  const OdeProblem p = wall_rebound_problem(0.1, 0.5);
  ReferenceOptions opts;
  opts.dt = 1e-5;
  for (auto _ : state) benchmark::DoNotOptimize(reference_solve(p, opts));
}
BENCHMARK(BM_ReferenceSolve)->Unit(benchmark::kMillisecond);

void BM_DragQuadrature(benchmark::State& state) {
  const double q = std::pow(10.0, -static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(drag::m_D(q));
}
BENCHMARK(BM_DragQuadrature)->DenseRange(0, 5);

}  // namespace
BENCHMARK_MAIN();
