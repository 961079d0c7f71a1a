#include <benchmark/benchmark.h>

#include <random>

#include "kpq/ensemble.hpp"
#include "kpq/matrix.hpp"
#include "kpq/section.hpp"
#include "kpq/zoo.hpp"

namespace {

kpq::ComplexMatrix hermitian(std::size_t n) {
  std::mt19937_64 rng(n);
  std::normal_distribution<double> d;
  kpq::ComplexMatrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      a(i, j) = i == j ? kpq::Complex(d(rng)) : kpq::Complex(d(rng), d(rng));
      a(j, i) = std::conj(a(i, j));
    }
  return a;
}

void BM_HermitianEig(benchmark::State& st) {
  const auto a = hermitian(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(kpq::hermitian_eig(a));
}
BENCHMARK(BM_HermitianEig)->RangeMultiplier(2)->Range(8, 64);

void BM_MatMul(benchmark::State& st) {
  const auto a = hermitian(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(kpq::mat_mul(a, a));
}
BENCHMARK(BM_MatMul)->RangeMultiplier(2)->Range(16, 128);

kpq::WeightedSection f2_sample(int radius) {
  const auto inst = kpq::make_instance("l1w:F2:poly2");
  kpq::SamplerSpec s;
  s.ensemble = "convolution";
  s.support_radius = radius;
  return std::get<kpq::WeightedSection>(kpq::sample_element(inst, s, 17));
}

void BM_Convolve(benchmark::State& st) {
  const auto f = f2_sample(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(kpq::convolve(f, f));
}
BENCHMARK(BM_Convolve)->DenseRange(1, 3);

void BM_RegularRepNorm(benchmark::State& st) {
  const auto f = f2_sample(2);
  for (auto _ : st) benchmark::DoNotOptimize(kpq::regular_rep_norm(f, static_cast<int>(st.range(0))));
}
BENCHMARK(BM_RegularRepNorm)->DenseRange(3, 5)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
