// Serial reference kernels against the OpenMP versions.
//
//   ./skeweig_kernels_bench --benchmark_filter=rank2k

#include <benchmark/benchmark.h>

#include "skeweig/kernels.hpp"
#include "skeweig/matrix.hpp"

using namespace skeweig;
namespace k = skeweig::kernels;

namespace {

Matrix random_matrix(Index rows, Index cols, std::uint64_t seed) {
  Matrix m(rows, cols);
  auto v = random_uniform(static_cast<std::size_t>(rows * cols), seed);
  std::copy(v.begin(), v.end(), m.data());
  return m;
}

template <bool Parallel>
void matvec(benchmark::State& state) {
  const Index n = state.range(0);
  auto a = random_skew(n, 1).materialize();
  auto x = random_uniform(static_cast<std::size_t>(n), 2);
  std::vector<double> y(static_cast<std::size_t>(n));
  for (auto _ : state) {
    if constexpr (Parallel)
      k::skew_matvec(a.view(), x, y);
    else
      k::serial::skew_matvec(a.view(), x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}

template <bool Parallel>
void rank2(benchmark::State& state) {
  const Index n = state.range(0);
  auto a = random_skew(n, 1).materialize();
  auto u = random_uniform(static_cast<std::size_t>(n), 2);
  auto v = random_uniform(static_cast<std::size_t>(n), 3);
  for (auto _ : state) {
    if constexpr (Parallel)
      k::skew_rank2_update(a.view(), u, v);
    else
      k::serial::skew_rank2_update(a.view(), u, v);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}

template <bool Parallel>
void matmat(benchmark::State& state) {
  const Index n = state.range(0), nb = state.range(1);
  auto a = random_skew(n, 1).materialize();
  auto x = random_matrix(n, nb, 2);
  Matrix y(n, nb);
  for (auto _ : state) {
    if constexpr (Parallel)
      k::skew_matmat(a.view(), x.view(), y.view());
    else
      k::serial::skew_matmat(a.view(), x.view(), y.view());
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * n * n * nb);
}

template <bool Parallel>
void rank2k(benchmark::State& state) {
  const Index n = state.range(0), nb = state.range(1);
  auto a = random_skew(n, 1).materialize();
  auto u = random_matrix(n, nb, 2);
  auto w = random_matrix(n, nb, 3);
  for (auto _ : state) {
    if constexpr (Parallel)
      k::skew_rank2k_update(a.view(), u.view(), w.view());
    else
      k::serial::skew_rank2k_update(a.view(), u.view(), w.view());
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * n * n * nb);
}

template <bool Parallel>
void gemm(benchmark::State& state) {
  const Index n = state.range(0);
  auto a = random_matrix(n, n, 1);
  auto b = random_matrix(n, n, 2);
  Matrix c(n, n);
  for (auto _ : state) {
    if constexpr (Parallel)
      k::gemm(k::Op::None, k::Op::None, 1.0, a.view(), b.view(), 0.0, c.view());
    else
      k::serial::gemm(k::Op::None, k::Op::None, 1.0, a.view(), b.view(), 0.0, c.view());
    benchmark::DoNotOptimize(c.data());
  }
  state.SetItemsProcessed(state.iterations() * 2 * n * n * n);
}

}  // namespace

BENCHMARK(matvec<false>)->Arg(512)->Arg(2048);
BENCHMARK(matvec<true>)->Arg(512)->Arg(2048);
BENCHMARK(rank2<false>)->Arg(512)->Arg(2048);
BENCHMARK(rank2<true>)->Arg(512)->Arg(2048);
BENCHMARK(matmat<false>)->Args({1024, 64});
BENCHMARK(matmat<true>)->Args({1024, 64});
BENCHMARK(rank2k<false>)->Args({1024, 64});
BENCHMARK(rank2k<true>)->Args({1024, 64});
BENCHMARK(gemm<false>)->Arg(256)->Arg(512);
BENCHMARK(gemm<true>)->Arg(256)->Arg(512);

BENCHMARK_MAIN();
