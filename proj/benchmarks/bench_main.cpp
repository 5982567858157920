#include <benchmark/benchmark.h>

#include <cmath>

#include "darboux2d/catalog.hpp"
#include "darboux2d/recovery.hpp"
#include "darboux2d/verify.hpp"

using namespace darboux;

static void BM_TaylorJet(benchmark::State& state) {
  const ScalarField2 f = oracle::twofold_potential(0.0);
  const int order = static_cast<int>(state.range(0));
  double x = 0.7;
  for (auto _ : state) {
    benchmark::DoNotOptimize(f.taylor({x, 1.1}, order));
    x += 1e-9;
  }
}
BENCHMARK(BM_TaylorJet)->DenseRange(0, 5);

static void BM_RecoverQ(benchmark::State& state) {
  RecoveryOptions o;
  o.keep_out = [](Point2 p) { return p.x * p.x + p.y * p.y < 0.0625; };
  const GridSpec grid{-3, 3, -3, 3, static_cast<int>(state.range(0)), static_cast<int>(state.range(0))};
  for (auto _ : state) {
    const NonlocalPotential q =
        recover_q(oracle::y_tilde_l2(0.0), oracle::y_tilde_l1(0.0), {3.0, 3.0}, 0.0, kDefaultPanelsPerUnit, o);
    benchmark::DoNotOptimize(sample(q.field(), grid));
  }
}
BENCHMARK(BM_RecoverQ)->Arg(33)->Arg(65)->Unit(benchmark::kMillisecond);

static void BM_ResidualGrid(benchmark::State& state) {
  const CatalogEntry e = build_trig_example(1.0, 0.0, 2.5);
  const int n = static_cast<int>(state.range(0));
  const GridSpec grid{0.5, 3, 0.5, 3, n, n};
  for (auto _ : state) {
    benchmark::DoNotOptimize(schrodinger_residual(e.closed_form.u, e.closed_form.y, grid, LaplacianMode::kAnalytic,
                                                  e.region));
  }
}
BENCHMARK(BM_ResidualGrid)->Arg(65)->Arg(129)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
