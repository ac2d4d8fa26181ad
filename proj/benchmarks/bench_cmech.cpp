#include <benchmark/benchmark.h>

#include "cmech/catalog.hpp"
#include "cmech/deprit.hpp"
#include "cmech/dynamics.hpp"
#include "cmech/kepler.hpp"
#include "cmech/sampling.hpp"
#include "cmech/symcheck.hpp"

using namespace cmech;

static void BM_SolveKepler(benchmark::State& state) {
  const double e = static_cast<double>(state.range(0)) / 100.0;
  double M = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_kepler(M, e));
    M += 0.0123;
  }
}
BENCHMARK(BM_SolveKepler)->Arg(0)->Arg(50)->Arg(99);

static void BM_CartesianToDelaunay(benchmark::State& state) {
  Rng rng(1);
  const KeplerState k = elements_to_cartesian(sample_elements(rng, 1, 2), 1.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(cartesian_to_delaunay(k.Q, k.P, 1.0, 1.0));
}
BENCHMARK(BM_CartesianToDelaunay);

static void BM_DepritRoundTrip(benchmark::State& state) {
  Rng rng(2);
  const JacobiState j = sample_jacobi_state(rng, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(from_deprit_n(to_deprit_n(j)));
}
BENCHMARK(BM_DepritRoundTrip)->Arg(3)->Arg(4)->Arg(6);

static void BM_Certify(benchmark::State& state, const char* chart, DiffScheme scheme) {
  const ChartSample s = draw_sample(*find_family(chart), 3, 0);
  for (auto _ : state) benchmark::DoNotOptimize(certify_symplectic(s.chart, s.point, kCertifyTol, scheme));
}
BENCHMARK_CAPTURE(BM_Certify, deprit3_fd, "deprit3", DiffScheme::CentralDifference);
BENCHMARK_CAPTURE(BM_Certify, deprit3_dual, "deprit3", DiffScheme::DualNumber);
BENCHMARK_CAPTURE(BM_Certify, deprit4_fd, "deprit4", DiffScheme::CentralDifference);
BENCHMARK_CAPTURE(BM_Certify, delaunay_fd, "delaunay", DiffScheme::CentralDifference);

static void BM_Leapfrog(benchmark::State& state) {
  Rng rng(4);
  const PhaseState s = sample_phase_state(rng, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(integrate(s, 0.01, 1000, 1000));
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_Leapfrog)->Arg(3)->Arg(6);

BENCHMARK_MAIN();
