#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "expfit/classify.hpp"
#include "expfit/dataset.hpp"
#include "expfit/global_fit.hpp"
#include "expfit/minimax.hpp"
#include "expfit/quartet.hpp"
#include "expfit/rng.hpp"
#include "expfit/tac.hpp"

using namespace expfit;

namespace {

Dataset make_noisy(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> t(n), T(n);
    double cur = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        t[i] = cur;
        cur += rng.uniform(0.05, 0.25);
        T[i] = 3.0 * std::exp(-0.8 * t[i]) + 1.0 + rng.uniform(-0.05, 0.05);
    }
    return Dataset(t, T);
}

void bm_fixed_rate(benchmark::State& state) {
    const Dataset data = make_noisy(static_cast<std::size_t>(state.range(0)), 5);
    for (auto _ : state) {
        auto result = fit_fixed_k(-0.8, data);
        benchmark::DoNotOptimize(result);
    }
}

void bm_line_minimax(benchmark::State& state) {
    const Dataset data = make_noisy(static_cast<std::size_t>(state.range(0)), 6);
    for (auto _ : state) {
        auto result = fit_line_minimax(data);
        benchmark::DoNotOptimize(result);
    }
}

void bm_classify(benchmark::State& state) {
    const Dataset data = make_noisy(static_cast<std::size_t>(state.range(0)), 7);
    for (auto _ : state) {
        auto tax = classify(data);
        benchmark::DoNotOptimize(tax);
    }
}

void bm_global_fit(benchmark::State& state) {
    const Dataset data = make_noisy(static_cast<std::size_t>(state.range(0)), 8);
    for (auto _ : state) {
        auto rep = fit(data);
        benchmark::DoNotOptimize(rep);
    }
}

void bm_quartet(benchmark::State& state) {
    std::vector<double> t{0.0, 1.0, 2.0, 3.0};
    std::vector<double> T(4);
    for (int i = 0; i < 4; ++i)
        T[i] = 2.0 * std::exp(-0.7 * t[i]) + 0.5 + ((i % 2 == 0) ? 0.1 : -0.1);
    const Dataset data(t, T);
    for (auto _ : state) {
        auto rep = fit_quartet(data);
        benchmark::DoNotOptimize(rep);
    }
}

void bm_demand_fit(benchmark::State& state) {
    const Dataset data = simulate_demand({48.0, 3.42, 0.006}, 15, 1.0, 0.1, 3);
    for (auto _ : state) {
        auto f = fit_demand(data);
        benchmark::DoNotOptimize(f);
    }
}

void bm_separable_level(benchmark::State& state) {
    // One full lattice sweep of the three-axis autoregression search.
    const ExpArParams p{-1.49, 1.65, -0.44, 0.54, -0.84, 1.3, 2.52, 3.86};
    const std::vector<double> series = expar_generate(p, 2.75, 3.1, 100, 0.0, 1);
    GridSpec grid{{GridAxis{"gamma", 0.5, 2.0, 10}, GridAxis{"z1", 1.0, 4.0, 10},
                   GridAxis{"z2", 2.0, 5.0, 10}}};
    SeparableOptions options;
    options.max_levels = 1;
    for (auto _ : state) {
        auto f = expar_fit(series, grid, options);
        benchmark::DoNotOptimize(f);
    }
}

BENCHMARK(bm_fixed_rate)->Arg(16)->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(bm_line_minimax)->Arg(16)->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(bm_classify)->Arg(30)->Arg(100);
BENCHMARK(bm_global_fit)->Arg(30);
BENCHMARK(bm_quartet);
BENCHMARK(bm_demand_fit);
BENCHMARK(bm_separable_level);

} // namespace

BENCHMARK_MAIN();
