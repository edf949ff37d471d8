#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <random>

#include "normkam/homological.hpp"
#include "normkam/normalform.hpp"
#include "normkam/oscillator.hpp"

using namespace normkam;

namespace {

const double golden = std::numbers::pi * (std::sqrt(5.0) - 1.0);

Series random_series(int order_max, int cutoff, int lo, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<SeriesEntry> entries;
    for (int k = lo; k <= order_max; ++k) {
        for (int j = 1; j <= cutoff; ++j) {
            entries.push_back({k, {j}, Complex(u(rng), u(rng)) * std::pow(0.7, j)});
        }
    }
    return make_series({1.0}, entries, order_max, cutoff);
}

}  // namespace

static void BM_multiply(benchmark::State& state)
{
    const int n = static_cast<int>(state.range(0));
    const int k = static_cast<int>(state.range(1));
    const Series a = random_series(n, k, 0, 1);
    const Series b = random_series(n, k, 0, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(multiply(a, b));
    }
}
BENCHMARK(BM_multiply)->Args({8, 16})->Args({16, 32})->Args({32, 32})->Args({12, 64});

static void BM_compose_map(benchmark::State& state)
{
    const int n = static_cast<int>(state.range(0));
    const Series phi = random_series(n, 32, 0, 3);
    const Series u = 1e-2 * random_series(n, 32, 1, 4);
    const Series v = 1e-2 * random_series(n, 32, 1, 5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(compose_map(phi, u, v));
    }
}
BENCHMARK(BM_compose_map)->Arg(8)->Arg(16)->Arg(32);

static void BM_solve_difference(benchmark::State& state)
{
    const Series h = random_series(12, static_cast<int>(state.range(0)), 0, 6);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_difference(h, golden, 0.0));
    }
}
BENCHMARK(BM_solve_difference)->Arg(32)->Arg(64)->Arg(256);

static void BM_kam_step(benchmark::State& state)
{
    const int n = static_cast<int>(state.range(0));
    const ReversibleCylinderMap m = make_linearizable_map({{1.0}, golden, 1e-3, 3, n, 32});
    const DiophantineParams dioph{{1.0}, golden, 0.38, 1.0, 32};
    for (auto _ : state) {
        benchmark::DoNotOptimize(kam_step(m, 3, dioph));
    }
}
BENCHMARK(BM_kam_step)->Arg(8)->Arg(16)->Arg(40)->Unit(benchmark::kMillisecond);

static void BM_poincare_map(benchmark::State& state)
{
    const auto prob = OscillatorProblem::make(std::sqrt(2.0), "0", "0", "atan(x)", "0.1*cos(t)", 0, 0, 0,
                                              std::numbers::pi / 2, -std::numbers::pi / 2);
    const PolarState s{static_cast<double>(state.range(0)), 0.0, 0.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(poincare_map(prob, s));
    }
}
BENCHMARK(BM_poincare_map)->Arg(50)->Arg(400)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
