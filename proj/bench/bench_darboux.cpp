#include "famkit/darboux.hpp"

#include <benchmark/benchmark.h>

using namespace famkit;

namespace {

const PolynomialOracle& surface() {
  static const PolynomialOracle p(2, {{1.0, {2, 1}}, {-0.5, {0, 3}}, {0.25, {1, 1}}});
  return p;
}

void grid(benchmark::State& state, Exec exec) {
  auto level = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    auto s = grid_sums(surface(), Box::unit(2), level, exec);
    benchmark::DoNotOptimize(s);
  }
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << (2 * level)));
}

void cylinders(benchmark::State& state, Exec exec) {
  static const auto g = PolynomialOracle::univariate({0.1, -1, 3});
  auto depth = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    auto s = cylinder_sums(g, depth, exec);
    benchmark::DoNotOptimize(s);
  }
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << depth));
}

}  // namespace

BENCHMARK_CAPTURE(grid, serial, Exec::serial)->DenseRange(6, 10, 2)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(grid, parallel, Exec::parallel)->DenseRange(6, 10, 2)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(cylinders, serial, Exec::serial)->DenseRange(14, 20, 3)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(cylinders, parallel, Exec::parallel)->DenseRange(14, 20, 3)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
