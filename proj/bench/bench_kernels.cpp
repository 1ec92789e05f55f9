// Parallel kernels against their serial references.
#include <benchmark/benchmark.h>

#include <random>

#include "rfspec/basis.hpp"
#include "rfspec/opmatrix.hpp"

using namespace rfspec;

namespace {

CoeffVector random_coeffs(std::size_t n) {
  std::mt19937_64 g(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CoeffVector c;
  c.coeffs.resize(n);
  for (auto& v : c.coeffs) v = {u(g), u(g)};
  return c;
}

std::vector<cplx> random_samples(std::size_t n) {
  return random_coeffs(n).coeffs;
}

void BM_build(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(build_base_matrix(1.37, n));
}

void BM_build_reference(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(build_base_matrix_reference(1.37, n));
}

void BM_apply(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const OperatorMatrix m = build_base_matrix(0.62, n, 20);
  const CoeffVector c = random_coeffs(n);
  for (auto _ : st) benchmark::DoNotOptimize(apply(m, c));
}

void BM_apply_reference(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const OperatorMatrix m = build_base_matrix(0.62, n, 20);
  const CoeffVector c = random_coeffs(n);
  for (auto _ : st) benchmark::DoNotOptimize(apply_reference(m, c));
}

void BM_analyze(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const SpectralGrid g = make_grid(n, 1.0);
  const std::vector<cplx> v = random_samples(n);
  for (auto _ : st) benchmark::DoNotOptimize(analyze(std::span<const cplx>(v), g));
}

void BM_analyze_naive(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const SpectralGrid g = make_grid(n, 1.0);
  const std::vector<cplx> v = random_samples(n);
  for (auto _ : st) benchmark::DoNotOptimize(analyze_naive(std::span<const cplx>(v), g));
}

} // namespace

BENCHMARK(BM_build)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_build_reference)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_apply)->Arg(256)->Arg(1024);
BENCHMARK(BM_apply_reference)->Arg(256)->Arg(1024);
BENCHMARK(BM_analyze)->Arg(256)->Arg(4096);
BENCHMARK(BM_analyze_naive)->Arg(256)->Arg(4096);

BENCHMARK_MAIN();
