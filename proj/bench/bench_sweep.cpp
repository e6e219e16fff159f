// Serial reference vs OpenMP alpha sweep. Set OMP_NUM_THREADS to vary the
// parallel side.

#include <benchmark/benchmark.h>

#include "fpn/dixit_pindyck.hpp"
#include "fpn/reference_data.hpp"
#include "fpn/solver_core.hpp"

namespace {

using namespace fpn;

struct Problem {
  ResidualFunction f;
  Vector x0;
  std::vector<FractionalOrder> grid;
};

Problem threshold_problem(double step) {
  const auto& row = reference::threshold_rows[0];
  auto k = dixit_pindyck::reference_structural_constants();
  k.a6 = row.a6;
  k.a7 = row.a7;
  return {dixit_pindyck::make_reduced_residual(k), {row.h0, row.l0}, default_alpha_grid(step)};
}

void BM_SweepSerial(benchmark::State& state) {
  const auto p = threshold_problem(4.0 / static_cast<double>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(alpha_sweep_serial(p.f, p.x0, p.grid, SweepSettings{}));
  }
  state.counters["orders"] = static_cast<double>(p.grid.size());
}

void BM_SweepParallel(benchmark::State& state) {
  const auto p = threshold_problem(4.0 / static_cast<double>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(alpha_sweep(p.f, p.x0, p.grid, SweepSettings{}));
  }
  state.counters["orders"] = static_cast<double>(p.grid.size());
}

void BM_ReferenceBatch(benchmark::State& state) {
  std::vector<dixit_pindyck::ThresholdCase> cases;
  for (const auto& row : reference::threshold_rows) {
    auto k = dixit_pindyck::reference_structural_constants();
    k.a6 = row.a6;
    k.a7 = row.a7;
    dixit_pindyck::ThresholdCase c{{k, {row.h0, row.l0}}, {}};
    c.settings.alpha = FractionalOrder(row.alpha);
    cases.push_back(c);
  }
  for (auto _ : state) benchmark::DoNotOptimize(dixit_pindyck::solve_thresholds_batch(cases));
}

}  // namespace

BENCHMARK(BM_SweepSerial)->Arg(80)->Arg(400)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Arg(80)->Arg(400)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ReferenceBatch)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
