#include "telewig/conditional_teleport.hpp"
#include "telewig/gain_optimizer.hpp"
#include "telewig/gaussian_channel.hpp"
#include "telewig/noisy_epr.hpp"
#include "telewig/oracle.hpp"
#include "telewig/phase_space.hpp"

#include <benchmark/benchmark.h>

using namespace telewig;

static void BM_OptimalGain(benchmark::State& state) {
  double r = 0.05;
  for (auto _ : state) {
    benchmark::DoNotOptimize(optimal_gain(r));
    r = r < 3.0 ? r + 0.01 : 0.05;
  }
}
BENCHMARK(BM_OptimalGain);

static void BM_ApplyMap(benchmark::State& state) {
  const auto map = build_map(TeleportParams::symmetric(SqueezeSpec::from_db(-6.0), 0.95));
  const auto in = make_squeezed_fock1(0.3);
  for (auto _ : state) benchmark::DoNotOptimize(apply_map(map, in));
}
BENCHMARK(BM_ApplyMap);

static void BM_OriginQuadrature(benchmark::State& state) {
  const auto map = build_map(TeleportParams::symmetric(SqueezeSpec::from_r(0.8), 1.1));
  const auto in = make_fock1();
  for (auto _ : state) benchmark::DoNotOptimize(origin_via_quadrature(map, in));
}
BENCHMARK(BM_OriginQuadrature)->Unit(benchmark::kMillisecond);

static void BM_DiskMonteCarlo(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(disk_average_mc(0.5, 1.1, DiskRegion(0.3), 0.6304, n, 42));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(0));
}
BENCHMARK(BM_DiskMonteCarlo)->Arg(1 << 14)->Arg(1 << 16)->Unit(benchmark::kMillisecond);

static void BM_ThresholdSquare(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(threshold_square(noise_from_db(2.0), 1.0, SquareRegion(0.3)));
}
BENCHMARK(BM_ThresholdSquare)->Unit(benchmark::kMicrosecond);

static void BM_OptimizeDisk(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(optimize_disk(9.0 / 11.0, DiskRegion(0.3), 0.6304));
}
BENCHMARK(BM_OptimizeDisk);
BENCHMARK_MAIN();
