#include <benchmark/benchmark.h>

#include <random>

#include "entropic/distill.hpp"
#include "entropic/quantum.hpp"
#include "entropic/simplex.hpp"

using namespace entropic;

static void BM_ProjectCycle(benchmark::State& state) {
  const auto sc = ncycle(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(project(sc));
}
BENCHMARK(BM_ProjectCycle)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_LpSolve(benchmark::State& state) {
  const auto sys = shannon_cone({"X1", "X2", "X3", "X4"});
  LinearExpr obj;
  for (const auto& c : sys.coordinates()) obj.add(c, 1);
  LinearSystem bounded = sys;
  bounded.add_inequality(LinearExpr({{"X1,X2,X3,X4", 1}}, -1));
  for (auto _ : state) benchmark::DoNotOptimize(lp_solve(obj, Direction::maximize, bounded));
}
BENCHMARK(BM_LpSolve)->Unit(benchmark::kMicrosecond);

static void BM_NonlocalContent(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const auto box = dfamily_box(make_rational(3, 10), d);
  for (auto _ : state) benchmark::DoNotOptimize(nonlocal_content(box));
}
BENCHMARK(BM_NonlocalContent)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

static void BM_Wire(benchmark::State& state) {
  const auto box = isotropic_box(make_rational(7, 10));
  const auto w = foster_wiring();
  for (auto _ : state) benchmark::DoNotOptimize(wire(box, w));
}
BENCHMARK(BM_Wire);

static void BM_EntropyVector(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto box = sample_noncontextual(ncycle(5), rng);
  for (auto _ : state) benchmark::DoNotOptimize(entropy_vector(box));
}
BENCHMARK(BM_EntropyVector);

static void BM_KlyachkoBox(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(klyachko_quantum_box(0.29736, 0.24131, 0.24131));
}
BENCHMARK(BM_KlyachkoBox);

static void BM_BilocalBox(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(bilocal_quantum_box(0.7, 0.1, 0.4, 0.2, {0.3, 0, 1.2, 0.5}, {0.9, 0.1, 2.0, 0}));
}
BENCHMARK(BM_BilocalBox);

BENCHMARK_MAIN();
