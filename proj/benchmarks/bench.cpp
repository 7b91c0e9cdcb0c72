#include <benchmark/benchmark.h>

#include <rtorsion/study.hpp>
#include <rtorsion/symm.hpp>
#include <rtorsion/torsion.hpp>
#include <rtorsion/volform.hpp>

using namespace rtorsion;

namespace {

const CWPairModel& model() { return figure_eight_model(); }

const RepSpace& space() {
  static const RepSpace rs(model().presentation);
  return rs;
}

const CircleTrace& circle_trace() {
  static const CircleTrace t = space().trace_circle(space().solve_near(RunConfig{}.seed));
  return t;
}

const Study& study() {
  static const Study s = run_study(model(), RunConfig{});
  return s;
}

void BM_TraceCircle(benchmark::State& state) {
  ContinuationOptions opts;
  opts.step = 1.0 / static_cast<double>(state.range(0));
  const RepPoint start = space().solve_near(RunConfig{}.seed);
  for (auto _ : state) benchmark::DoNotOptimize(space().trace_circle(start, opts));
}
BENCHMARK(BM_TraceCircle)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_NormalizedTorsion(benchmark::State& state) {
  const RepPoint& p = circle_trace().points[17];
  for (auto _ : state) benchmark::DoNotOptimize(normalized_torsion(model(), p.images));
}
BENCHMARK(BM_NormalizedTorsion)->Unit(benchmark::kMicrosecond);

void BM_TauEval(benchmark::State& state) {
  const RepPoint& p = circle_trace().points[17];
  for (auto _ : state) benchmark::DoNotOptimize(tau_eval(model(), p.images, p.tangent));
}
BENCHMARK(BM_TauEval)->Unit(benchmark::kMicrosecond);

void BM_Metrize(benchmark::State& state) {
  MetrizeOptions opts;
  opts.midpoints = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(metrize(model(), space(), circle_trace(), opts));
}
BENCHMARK(BM_Metrize)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_CheckSymmetry(benchmark::State& state) {
  const TorsionFunction& f = study().torsion;
  for (auto _ : state) benchmark::DoNotOptimize(check_symmetry(f, f, SymmetryTransform::iota()));
}
BENCHMARK(BM_CheckSymmetry)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
