#pragma once

// BLAS-like kernels for skew-symmetric matrices held in their strictly lower
// triangle, plus the dense gemm they are built on.
//
// Every kernel comes in two versions:
//   skeweig::kernels          OpenMP-parallel, cache blocked
//   skeweig::kernels::serial  straightforward loops, kept as the reference
//
// The parallel kernels assign every output element to exactly one thread and
// accumulate in a fixed order, so results do not depend on the thread count
// unless noted otherwise (skew_matvec reduces per-thread partial sums in
// thread order and is reproducible for a fixed thread count).

#include <span>

#include "skeweig/types.hpp"

namespace skeweig::kernels {

enum class Op { None, Trans };

/// y = A x for skew A (only the strictly lower part of `a` is read).
void skew_matvec(ConstMatrixRef a, std::span<const double> x, std::span<double> y);

/// A <- A - v u^T + u v^T, strictly lower part only.
void skew_rank2_update(MatrixRef a, std::span<const double> u, std::span<const double> v);

/// Y = A X for skew A (m x m) and X (m x k).
void skew_matmat(ConstMatrixRef a, ConstMatrixRef x, MatrixRef y);

/// A <- A - W U^T + U W^T, strictly lower part only. U and W are m x k.
void skew_rank2k_update(MatrixRef a, ConstMatrixRef u, ConstMatrixRef w);

/// C <- alpha op(A) op(B) + beta C.
void gemm(Op op_a, Op op_b, double alpha, ConstMatrixRef a, ConstMatrixRef b, double beta, MatrixRef c);

/// Same as gemm() but never spawns threads; for use inside parallel regions.
void gemm_sequential(Op op_a, Op op_b, double alpha, ConstMatrixRef a, ConstMatrixRef b, double beta,
                     MatrixRef c);

namespace serial {

void skew_matvec(ConstMatrixRef a, std::span<const double> x, std::span<double> y);
void skew_rank2_update(MatrixRef a, std::span<const double> u, std::span<const double> v);
void skew_matmat(ConstMatrixRef a, ConstMatrixRef x, MatrixRef y);
void skew_rank2k_update(MatrixRef a, ConstMatrixRef u, ConstMatrixRef w);
void gemm(Op op_a, Op op_b, double alpha, ConstMatrixRef a, ConstMatrixRef b, double beta, MatrixRef c);

}  // namespace serial

}  // namespace skeweig::kernels
