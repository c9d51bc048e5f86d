#include <benchmark/benchmark.h>

#include "gsg/fluctuations.hpp"
#include "gsg/model.hpp"
#include "gsg/montecarlo.hpp"
#include "gsg/parisi.hpp"

namespace {

void LogPartitionQuadrature(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto j = gsg::make_disorder(n, 11);
  gsg::ModelParams p{1.0, 0.0, 0.0, n, false};
  for (auto _ : state) {
    auto r = gsg::log_partition_quadrature(j, p);
    benchmark::DoNotOptimize(r.log_z);
  }
}
BENCHMARK(LogPartitionQuadrature)->Arg(1)->Arg(2)->Arg(3);

void LogPartitionRadialMc(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto j = gsg::make_disorder(n, 11);
  gsg::ModelParams p{0.5, 0.0, 0.0, n, false};
  gsg::McConfig cfg;
  cfg.n_directions = 1024;
  cfg.radial_points = 384;
  for (auto _ : state) {
    auto r = gsg::log_partition_mc(j, p, cfg);
    benchmark::DoNotOptimize(r.log_z);
  }
}
BENCHMARK(LogPartitionRadialMc)->Arg(8)->Arg(16)->Arg(32);

void RsbFunctional(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  std::vector<double> q(k), m(k);
  for (std::size_t a = 0; a < k; ++a) {
    q[a] = 0.1 * static_cast<double>(a + 1);
    m[a] = static_cast<double>(a + 1) / static_cast<double>(k + 1);
  }
  gsg::PiecewiseOrderParameter x(q, m);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gsg::rsb_pressure_functional(1.4, -0.2, x));
  }
}
BENCHMARK(RsbFunctional)->Arg(2)->Arg(8)->Arg(32);

void FluctuationTriple(benchmark::State& state) {
  for (auto _ : state) {
    auto t = gsg::integrate_triple(0.5, 0.0, 0.0, 1.0,
                                   static_cast<std::size_t>(state.range(0)));
    benchmark::DoNotOptimize(t.a);
  }
}
BENCHMARK(FluctuationTriple)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
