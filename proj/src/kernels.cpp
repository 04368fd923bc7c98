#include <omp.h>

#include <algorithm>
#include <vector>

#include "skeweig/kernels.hpp"

namespace skeweig::kernels {

namespace {

constexpr Index kBlock = 64;

// Splits columns [0, n) of a strictly lower triangle into `parts` contiguous
// ranges of roughly equal area.
std::vector<Index> triangle_partition(Index n, int parts) {
  std::vector<Index> bounds(static_cast<std::size_t>(parts) + 1, n);
  bounds[0] = 0;
  const double total = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  double acc = 0.0;
  int next = 1;
  for (Index j = 0; j < n && next < parts; ++j) {
    acc += static_cast<double>(n - 1 - j);
    while (next < parts && acc >= total * next / parts) bounds[static_cast<std::size_t>(next++)] = j + 1;
  }
  return bounds;
}

}  // namespace

void skew_matvec(ConstMatrixRef a, std::span<const double> x, std::span<double> y) {
  const Index n = a.rows();
  const int threads = n >= 256 && !omp_in_parallel() ? omp_get_max_threads() : 1;
  if (threads == 1) {
    serial::skew_matvec(a, x, y);
    return;
  }

  // Each thread sweeps a column range with the fused scatter/dot loop into a
  // private accumulator; partial results are then summed in thread order.
  const auto bounds = triangle_partition(n, threads);
  std::vector<double> partial(static_cast<std::size_t>(n * threads), 0.0);
#pragma omp parallel num_threads(threads)
  {
    const int t = omp_get_thread_num();
    double* yt = partial.data() + static_cast<std::size_t>(t) * n;
    for (Index j = bounds[t]; j < bounds[t + 1]; ++j) {
      const double* col = a.col_ptr(j);
      const double xj = x[j];
      double s = 0.0;
      for (Index i = j + 1; i < n; ++i) {
        yt[i] += col[i] * xj;
        s += col[i] * x[i];
      }
      yt[j] -= s;
    }
#pragma omp barrier
#pragma omp for schedule(static)
    for (Index i = 0; i < n; ++i) {
      double s = 0.0;
      for (int p = 0; p < threads; ++p) s += partial[static_cast<std::size_t>(p * n + i)];
      y[i] = s;
    }
  }
}

void skew_rank2_update(MatrixRef a, std::span<const double> u, std::span<const double> v) {
  const Index n = a.rows();
#pragma omp parallel for schedule(dynamic, 16) if (n >= 256)
  for (Index j = 0; j < n; ++j) {
    double* col = a.col_ptr(j);
    const double uj = u[j];
    const double vj = v[j];
    for (Index i = j + 1; i < n; ++i) col[i] += u[i] * vj - v[i] * uj;
  }
}

void skew_matmat(ConstMatrixRef a, ConstMatrixRef x, MatrixRef y) {
  const Index m = a.rows();
  const Index k = x.cols();
  const Index n_blocks = (m + kBlock - 1) / kBlock;

  // Y = L X - L^T X with L the strictly lower part of A.
#pragma omp parallel
  {
    // -L^T X: block J of Y depends on the column block J of A only.
#pragma omp for schedule(dynamic, 1)
    for (Index blk = 0; blk < n_blocks; ++blk) {
      const Index j0 = blk * kBlock;
      const Index j1 = std::min(m, j0 + kBlock);
      auto yj = y.block(j0, 0, j1 - j0, k);
      gemm_sequential(Op::Trans, Op::None, -1.0, a.block(j1, j0, m - j1, j1 - j0), x.block(j1, 0, m - j1, k), 0.0,
                      yj);
      // diagonal block, both halves
      for (Index c = 0; c < k; ++c) {
        for (Index j = j0; j < j1; ++j) {
          const double* col = a.col_ptr(j);
          const double xj = x(j, c);
          double s = 0.0;
          for (Index i = j + 1; i < j1; ++i) {
            y(i, c) += col[i] * xj;
            s += col[i] * x(i, c);
          }
          y(j, c) -= s;
        }
      }
    }

    // +L X below the diagonal blocks: row block I takes A[I, 0:i0] X[0:i0, :].
#pragma omp for schedule(dynamic, 1)
    for (Index blk = 1; blk < n_blocks; ++blk) {
      const Index i0 = blk * kBlock;
      const Index i1 = std::min(m, i0 + kBlock);
      auto yi = y.block(i0, 0, i1 - i0, k);
      gemm_sequential(Op::None, Op::None, 1.0, a.block(i0, 0, i1 - i0, i0), x.block(0, 0, i0, k), 1.0, yi);
    }
  }
}

void skew_rank2k_update(MatrixRef a, ConstMatrixRef u, ConstMatrixRef w) {
  const Index m = a.rows();
  const Index k = u.cols();
  if (m == 0 || k == 0) return;

  // U W^T - W U^T = [U, -W] [W, U]^T
  Matrix left(m, 2 * k);
  Matrix right(m, 2 * k);
  for (Index c = 0; c < k; ++c) {
    for (Index i = 0; i < m; ++i) {
      left(i, c) = u(i, c);
      left(i, k + c) = -w(i, c);
      right(i, c) = w(i, c);
      right(i, k + c) = u(i, c);
    }
  }

  const Index n_blocks = (m + kBlock - 1) / kBlock;
#pragma omp parallel for schedule(dynamic, 1)
  for (Index blk = 0; blk < n_blocks; ++blk) {
    const Index j0 = blk * kBlock;
    const Index j1 = std::min(m, j0 + kBlock);
    for (Index j = j0; j < j1; ++j) {
      double* col = a.col_ptr(j);
      for (Index c = 0; c < 2 * k; ++c) {
        const double r = right(j, c);
        const double* l = left.col(c).data();
        for (Index i = j + 1; i < j1; ++i) col[i] += l[i] * r;
      }
    }
    if (j1 < m) {
      auto below = a.block(j1, j0, m - j1, j1 - j0);
      gemm_sequential(Op::None, Op::Trans, 1.0, left.block(j1, 0, m - j1, 2 * k), right.block(j0, 0, j1 - j0, 2 * k),
                      1.0, below);
    }
  }
}

}  // namespace skeweig::kernels
