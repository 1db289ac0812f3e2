#include <random>

#include <benchmark/benchmark.h>
#include <fmt/format.h>

#include "trendnet/correlation.hpp"

using namespace trendnet;

namespace {

Panel make_panel(int locations, int days) {
  std::mt19937 rng(static_cast<unsigned>(locations * 1000 + days));
  std::uniform_int_distribution<int> v(0, 100);
  const DateGrid grid(make_date(2020, 1, 20), Step::Daily, static_cast<std::size_t>(days));
  std::vector<LocationSeries> series;
  for (int k = 0; k < locations; ++k) {
    std::vector<double> values(static_cast<std::size_t>(days));
    for (auto& x : values) x = v(rng);
    series.emplace_back(fmt::format("L{:03d}", k), "bench", grid, std::move(values));
  }
  return Panel("bench", grid, std::move(series));
}

void BM_Serial(benchmark::State& state) {
  const auto panel = make_panel(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(correlation_matrix_serial(panel));
  state.counters["pairs"] = static_cast<double>(panel.size() * (panel.size() - 1) / 2);
}

void BM_Parallel(benchmark::State& state) {
  const auto panel = make_panel(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(correlation_matrix(panel));
  state.counters["pairs"] = static_cast<double>(panel.size() * (panel.size() - 1) / 2);
  state.counters["threads"] = parallel_threads();
}

}  // namespace

BENCHMARK(BM_Serial)->Args({54, 72})->Args({200, 72})->Args({500, 365})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Parallel)->Args({54, 72})->Args({200, 72})->Args({500, 365})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
