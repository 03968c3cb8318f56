#include <benchmark/benchmark.h>

#include <random>

#include "qpencil/debranges.hpp"
#include "qpencil/line_spectrum.hpp"
#include "qpencil/pencil.hpp"

using namespace qpencil;

namespace {

Coefficients comb(int n) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> w(0.5, 2.0), v(0.2, 1.5);
  std::vector<Atom<double>> oa, va;
  for (int i = 0; i < n; ++i) {
    const double x = -0.5 * n + i;
    oa.push_back({x, (i % 2 ? -1.0 : 1.0) * w(rng)});
    va.push_back({x, v(rng)});
  }
  return {CoefficientMeasure(oa, {}), CoefficientMeasure(va, {}, false)};
}

void BM_Transfer(benchmark::State& state) {
  const auto c = comb(static_cast<int>(state.range(0)));
  const cplx z(0.7, 0.2);
  for (auto _ : state) benchmark::DoNotOptimize(transfer(c, z, -100.0, 100.0));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Transfer)->RangeMultiplier(4)->Range(4, 256)->Complexity();

void BM_EigenvaluesLine(benchmark::State& state) {
  const auto c = comb(static_cast<int>(state.range(0)));
  const auto [lo, hi] = default_window(c);
  for (auto _ : state) benchmark::DoNotOptimize(eigenvalues_line(c, lo, hi));
}
BENCHMARK(BM_EigenvaluesLine)->DenseRange(2, 10, 4)->Unit(benchmark::kMillisecond);

void BM_PencilSpectrum(benchmark::State& state) {
  const auto c = comb(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pencil_spectrum(assemble_pencil(c, WholeLine{})));
}
BENCHMARK(BM_PencilSpectrum)->RangeMultiplier(2)->Range(2, 64)->Unit(benchmark::kMicrosecond);

void BM_SpectralMeasure(benchmark::State& state) {
  const auto c = comb(static_cast<int>(state.range(0)));
  const auto [lo, hi] = default_window(c);
  for (auto _ : state) benchmark::DoNotOptimize(spectral_measure(c, lo, hi));
}
BENCHMARK(BM_SpectralMeasure)->DenseRange(2, 6, 2)->Unit(benchmark::kMillisecond);

void BM_BasePoint(benchmark::State& state) {
  const auto c = comb(4);
  for (auto _ : state) benchmark::DoNotOptimize(base_point_estimate(c, -2.0));
}
BENCHMARK(BM_BasePoint)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
