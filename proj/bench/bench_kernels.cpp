// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <numeric>

#include "gsa/design.hpp"
#include "gsa/kernels.hpp"
#include "gsa/models.hpp"

namespace {

using namespace gsa;

const Matrix& ishigami_inputs() {
  static const Matrix values = [] {
    FactorSpace space;
    for (const char* n : {"x1", "x2", "x3"}) space.factors.push_back({n, Uniform{-3.141592653589793, 3.141592653589793}});
    auto s = lhs_design(3, 1 << 16, 1);
    bind(s, space);
    return s.values;
  }();
  return values;
}

kernels::RowFunction ishigami_row() {
  return [](std::span<const double> row, std::span<double> out) {
    out[0] = ishigami(row[0], row[1], row[2], 7.0, 0.1);
  };
}

void BM_rows_serial(benchmark::State& state) {
  const auto fn = ishigami_row();
  Matrix y(ishigami_inputs().rows(), 1);
  std::vector<kernels::RowFault> faults;
  for (auto _ : state) {
    kernels::evaluate_rows_serial(fn, ishigami_inputs(), y, faults);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * ishigami_inputs().rows());
}

void BM_rows_parallel(benchmark::State& state) {
  const auto fn = ishigami_row();
  Matrix y(ishigami_inputs().rows(), 1);
  std::vector<kernels::RowFault> faults;
  for (auto _ : state) {
    kernels::evaluate_rows(fn, ishigami_inputs(), y, faults, static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * ishigami_inputs().rows());
}

std::vector<double> signal(std::size_t n) {
  std::vector<double> y(n);
  for (std::size_t j = 0; j < n; ++j) y[j] = std::sin(0.37 * static_cast<double>(j * j % 1009));
  return y;
}

std::vector<std::size_t> all_freqs(std::size_t n) {
  std::vector<std::size_t> f((n - 1) / 2);
  std::iota(f.begin(), f.end(), std::size_t{1});
  return f;
}

void BM_fourier_serial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto y = signal(n);
  const auto f = all_freqs(n);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::fourier_power_serial(y, f));
}

void BM_fourier_parallel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto y = signal(n);
  const auto f = all_freqs(n);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::fourier_power(y, f, static_cast<int>(state.range(1))));
}

}  // namespace

// Wall-clock time: CPU time of the calling thread hides the worker threads.
BENCHMARK(BM_rows_serial)->UseRealTime();
BENCHMARK(BM_rows_parallel)->Arg(1)->Arg(2)->Arg(4)->UseRealTime();
BENCHMARK(BM_fourier_serial)->Arg(1027)->Arg(4097)->UseRealTime();
BENCHMARK(BM_fourier_parallel)->Args({1027, 2})->Args({4097, 2})->Args({4097, 4})->UseRealTime();

BENCHMARK_MAIN();
