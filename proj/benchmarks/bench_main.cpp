#include <benchmark/benchmark.h>

#include "curveflow/experiments.hpp"
#include "curveflow/initial_data.hpp"
#include "curveflow/schemes.hpp"

namespace {

using namespace curveflow;

SchemeState tube_state(int J) {
  return initial_state(bgn_project(interpolate(make_parameterization("tube"), J)));
}

void BM_BgnProject(benchmark::State& state) {
  const int J = static_cast<int>(state.range(0));
  const ClosedCurve sampled = interpolate(make_parameterization("tube"), J);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bgn_project(sampled));
  }
}
BENCHMARK(BM_BgnProject)->Arg(64)->Arg(256);

void BM_Assemble(benchmark::State& state) {
  const int J = static_cast<int>(state.range(0));
  const SchemeState scheme_state = tube_state(J);
  SchemeConfig cfg;
  cfg.variant = Variant::linear;
  cfg.lambda = 0.5;
  cfg.dt = 1e-4;
  for (auto _ : state) {
    benchmark::DoNotOptimize(assemble(scheme_state, cfg));
  }
}
BENCHMARK(BM_Assemble)->Arg(64)->Arg(256)->Arg(512);

void BM_StepLinear(benchmark::State& state) {
  const int J = static_cast<int>(state.range(0));
  const SchemeState scheme_state = tube_state(J);
  SchemeConfig cfg;
  cfg.variant = Variant::linear;
  cfg.lambda = 0.5;
  cfg.dt = 1e-4;
  SolverCache cache;
  for (auto _ : state) {
    benchmark::DoNotOptimize(step(scheme_state, cfg, &cache));
  }
}
BENCHMARK(BM_StepLinear)->Arg(64)->Arg(128)->Arg(256)->Arg(512);

void BM_StepNonlinear(benchmark::State& state) {
  const int J = static_cast<int>(state.range(0));
  const SchemeState scheme_state = tube_state(J);
  SchemeConfig cfg;
  cfg.variant = Variant::nonlinear;
  cfg.lambda = 0.0;
  cfg.dt = 1e-3;
  SolverCache cache;
  for (auto _ : state) {
    benchmark::DoNotOptimize(step(scheme_state, cfg, &cache));
  }
}
BENCHMARK(BM_StepNonlinear)->Arg(128)->Arg(256);

void BM_SolveFresh(benchmark::State& state) {
  const int J = static_cast<int>(state.range(0));
  const SchemeState scheme_state = tube_state(J);
  SchemeConfig cfg;
  cfg.variant = Variant::linear;
  cfg.lambda = 0.5;
  cfg.dt = 1e-4;
  const SparseSystem system = assemble(scheme_state, cfg);
  const CompressedMatrix matrix(system.dimension, system.entries);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve(matrix, system.rhs));
  }
}
BENCHMARK(BM_SolveFresh)->Arg(64)->Arg(256)->Arg(512);

}  // namespace

BENCHMARK_MAIN();
