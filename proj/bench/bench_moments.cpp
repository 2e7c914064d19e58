// Moment tensor kernels: OpenMP against the serial reference.
#include <benchmark/benchmark.h>

#include "nongauss/kernels.hpp"
#include "nongauss/randsource.hpp"

namespace {

const nongauss::SampleMatrix& data(std::size_t t, std::size_t n) {
  static nongauss::SampleMatrix x;
  if (static_cast<std::size_t>(x.rows()) != t || static_cast<std::size_t>(x.cols()) != n) {
    nongauss::RngStream rng(1);
    x = nongauss::mvnormal_sample(t, Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)), rng);
  }
  return x;
}

void BM_serial(benchmark::State& st) {
  const auto& x = data(static_cast<std::size_t>(st.range(0)), static_cast<std::size_t>(st.range(1)));
  for (auto _ : st) benchmark::DoNotOptimize(nongauss::kernels::moment_tensor_serial(x, static_cast<std::size_t>(st.range(2))));
}

void BM_omp(benchmark::State& st) {
  const auto& x = data(static_cast<std::size_t>(st.range(0)), static_cast<std::size_t>(st.range(1)));
  for (auto _ : st) benchmark::DoNotOptimize(nongauss::kernels::moment_tensor_omp(x, static_cast<std::size_t>(st.range(2))));
}

void args(benchmark::internal::Benchmark* b) {
  for (int d : {3, 4, 6}) b->Args({100000, 10, d});
  b->Args({10000, 30, 4});
  b->Unit(benchmark::kMillisecond);
}

}  // namespace

BENCHMARK(BM_serial)->Apply(args);
BENCHMARK(BM_omp)->Apply(args);

BENCHMARK_MAIN();
