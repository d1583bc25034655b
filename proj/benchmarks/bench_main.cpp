#include "epstein/analytic_moments.hpp"
#include "epstein/bounds_lab.hpp"
#include "epstein/combinatorics.hpp"
#include "epstein/lattice_model.hpp"
#include "epstein/poisson_model.hpp"
#include "epstein/stat_engine.hpp"
#include "epstein/zeta_eval.hpp"

#include <benchmark/benchmark.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace epstein;

static void BM_PoissonMomentExact(benchmark::State& st) {
  const int k = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(poisson_moment_exact(k, make_rational(3, 4), make_rational(1)));
}
BENCHMARK(BM_PoissonMomentExact)->DenseRange(4, 8, 2)->Unit(benchmark::kMillisecond);

static void BM_LimitMomentFloat(benchmark::State& st) {
  const int k = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(limit_moment(k, 1.0, 1.0));
}
BENCHMARK(BM_LimitMomentFloat)->Arg(10)->Arg(16)->Unit(benchmark::kMicrosecond);

static void BM_EnumerateD(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(enumerate_D(static_cast<int>(st.range(0))));
}
BENCHMARK(BM_EnumerateD)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_PoissonStream(benchmark::State& st) {
  const double grid[] = {0.75, 1.0};
  double out[2];
  std::uint64_t seed = 0;
  for (auto _ : st) {
    stream_truncated(static_cast<double>(st.range(0)), seed++, grid, 1.0, out);
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_PoissonStream)->Arg(1000)->Arg(10000)->Unit(benchmark::kMicrosecond);

static void BM_HeckeLll(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  std::uint64_t seed = 0;
  for (auto _ : st) benchmark::DoNotOptimize(lll_reduce(gm_sample(n, 40, seed++).basis));
}
BENCHMARK(BM_HeckeLll)->Arg(12)->Arg(14)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_VolumeSpectrum(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const double cutoff = static_cast<double>(st.range(1));
  std::uint64_t seed = 0;
  for (auto _ : st) benchmark::DoNotOptimize(volume_spectrum(gm_sample(n, 40, seed++).basis, cutoff));
}
BENCHMARK(BM_VolumeSpectrum)->Args({12, 100})->Args({14, 1000})->Unit(benchmark::kMillisecond);

static void BM_EpsilonCurve(benchmark::State& st) {
  const auto spec = volume_spectrum(gm_sample(14, 40, 1).basis, 1000.0);
  std::vector<double> grid;
  for (int i = 6; i <= 20; ++i) grid.push_back(i / 10.0);
  for (auto _ : st) benchmark::DoNotOptimize(epsilon_curve(spec, grid, 1.0));
}
BENCHMARK(BM_EpsilonCurve)->Unit(benchmark::kMicrosecond);

static void BM_SymIntegral3(benchmark::State& st) {
  SymIntegralSpec s;
  s.n = static_cast<int>(st.range(0));
  s.exponents = {1, 1, 1};
  for (auto _ : st) benchmark::DoNotOptimize(sym_integral_3(s));
}
BENCHMARK(BM_SymIntegral3)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond)->Iterations(2);

static void BM_KsDistance(benchmark::State& st) {
  std::vector<double> v(static_cast<std::size_t>(st.range(0)));
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = -2.0 * std::log1p(-(i + 0.5) / static_cast<double>(v.size()));
  for (auto _ : st)
    benchmark::DoNotOptimize(ks_distance(v, [](double x) { return 1.0 - std::exp(-x / 2.0); }));
}
BENCHMARK(BM_KsDistance)->Arg(100000)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
