// Packed, cache-blocked gemm. The loop structure follows the usual
// Goto/BLIS layout: C is cut into NC-wide column slabs, K into KC-deep
// panels, and each slab into MC-high row blocks that are handed to threads.
// Each C element is accumulated in the same order whatever the thread count.

#include <omp.h>

#include <algorithm>
#include <vector>

#include "skeweig/kernels.hpp"

namespace skeweig::kernels {

namespace {

constexpr Index kMR = 4;
constexpr Index kNR = 4;
constexpr Index kMC = 128;
constexpr Index kKC = 256;
constexpr Index kNC = 2048;

// op(X)(i, p) accessor
struct Operand {
  ConstMatrixRef m;
  bool trans;
  double operator()(Index i, Index p) const { return trans ? m(p, i) : m(i, p); }
};

// Rows [i0, i0+mc) x depth [p0, p0+kc) of op(A), scaled by alpha, stored as
// MR-row slivers: sliver s holds kc groups of kMR consecutive values.
void pack_a(const Operand& a, Index i0, Index mc, Index p0, Index kc, double alpha, double* buf) {
  for (Index is = 0; is < mc; is += kMR) {
    const Index mr = std::min(kMR, mc - is);
    for (Index p = 0; p < kc; ++p) {
      for (Index i = 0; i < mr; ++i) buf[i] = alpha * a(i0 + is + i, p0 + p);
      for (Index i = mr; i < kMR; ++i) buf[i] = 0.0;
      buf += kMR;
    }
  }
}

// Depth [p0, p0+kc) x columns [j0, j0+nc) of op(B) as NR-column slivers.
void pack_b_sliver(const Operand& b, Index p0, Index kc, Index j0, Index nr, double* buf) {
  for (Index p = 0; p < kc; ++p) {
    for (Index j = 0; j < nr; ++j) buf[j] = b(p0 + p, j0 + j);
    for (Index j = nr; j < kNR; ++j) buf[j] = 0.0;
    buf += kNR;
  }
}

void micro_kernel(Index kc, const double* __restrict a, const double* __restrict b, double* c, Index ldc, Index mr,
                  Index nr) {
  double acc[kNR][kMR] = {};
  for (Index p = 0; p < kc; ++p) {
    for (Index j = 0; j < kNR; ++j) {
      const double bj = b[j];
      for (Index i = 0; i < kMR; ++i) acc[j][i] += a[i] * bj;
    }
    a += kMR;
    b += kNR;
  }
  for (Index j = 0; j < nr; ++j)
    for (Index i = 0; i < mr; ++i) c[i + j * ldc] += acc[j][i];
}

void scale(MatrixRef c, double beta) {
  for (Index j = 0; j < c.cols(); ++j) {
    double* col = c.col_ptr(j);
    if (beta == 0.0)
      std::fill(col, col + c.rows(), 0.0);
    else if (beta != 1.0)
      for (Index i = 0; i < c.rows(); ++i) col[i] *= beta;
  }
}

void gemm_impl(Op op_a, Op op_b, double alpha, ConstMatrixRef a, ConstMatrixRef b, double beta, MatrixRef c,
               bool parallel) {
  const Index m = c.rows();
  const Index n = c.cols();
  const Index k = op_a == Op::None ? a.cols() : a.rows();
  if (m == 0 || n == 0) return;
  scale(c, beta);
  if (k == 0 || alpha == 0.0) return;

  const Operand oa{a, op_a == Op::Trans};
  const Operand ob{b, op_b == Op::Trans};
  const bool threaded = parallel && m * n * k >= 64 * 64 * 64 && !omp_in_parallel();

  std::vector<double> bbuf(static_cast<std::size_t>(kKC * (std::min(kNC, n) + kNR)));

  for (Index jc = 0; jc < n; jc += kNC) {
    const Index nc = std::min(kNC, n - jc);
    const Index n_slivers = (nc + kNR - 1) / kNR;
    for (Index pc = 0; pc < k; pc += kKC) {
      const Index kc = std::min(kKC, k - pc);
      const Index n_blocks = (m + kMC - 1) / kMC;

#pragma omp parallel if (threaded)
      {
#pragma omp for schedule(static)
        for (Index s = 0; s < n_slivers; ++s)
          pack_b_sliver(ob, pc, kc, jc + s * kNR, std::min(kNR, nc - s * kNR), bbuf.data() + s * kNR * kc);

        std::vector<double> abuf(static_cast<std::size_t>(kMC * kc + kMR * kc));
#pragma omp for schedule(dynamic, 1)
        for (Index blk = 0; blk < n_blocks; ++blk) {
          const Index ic = blk * kMC;
          const Index mc = std::min(kMC, m - ic);
          pack_a(oa, ic, mc, pc, kc, alpha, abuf.data());
          for (Index s = 0; s < n_slivers; ++s) {
            const Index nr = std::min(kNR, nc - s * kNR);
            const double* bp = bbuf.data() + s * kNR * kc;
            for (Index is = 0; is < mc; is += kMR) {
              const Index mr = std::min(kMR, mc - is);
              micro_kernel(kc, abuf.data() + is * kc, bp, &c(ic + is, jc + s * kNR), c.ld(), mr, nr);
            }
          }
        }
      }
    }
  }
}

}  // namespace

void gemm(Op op_a, Op op_b, double alpha, ConstMatrixRef a, ConstMatrixRef b, double beta, MatrixRef c) {
  gemm_impl(op_a, op_b, alpha, a, b, beta, c, true);
}

void gemm_sequential(Op op_a, Op op_b, double alpha, ConstMatrixRef a, ConstMatrixRef b, double beta,
                     MatrixRef c) {
  gemm_impl(op_a, op_b, alpha, a, b, beta, c, false);
}

}  // namespace skeweig::kernels
