#include <algorithm>

#include "skeweig/kernels.hpp"

namespace skeweig::kernels::serial {

void skew_matvec(ConstMatrixRef a, std::span<const double> x, std::span<double> y) {
  const Index n = a.rows();
  std::fill(y.begin(), y.end(), 0.0);
  for (Index j = 0; j < n; ++j) {
    const double* col = a.col_ptr(j);
    const double xj = x[j];
    double s = 0.0;
    for (Index i = j + 1; i < n; ++i) {
      y[i] += col[i] * xj;
      s += col[i] * x[i];
    }
    y[j] -= s;
  }
}

void skew_rank2_update(MatrixRef a, std::span<const double> u, std::span<const double> v) {
  const Index n = a.rows();
  for (Index j = 0; j < n; ++j) {
    double* col = a.col_ptr(j);
    const double uj = u[j];
    const double vj = v[j];
    for (Index i = j + 1; i < n; ++i) col[i] += u[i] * vj - v[i] * uj;
  }
}

void skew_matmat(ConstMatrixRef a, ConstMatrixRef x, MatrixRef y) {
  for (Index c = 0; c < x.cols(); ++c) skew_matvec(a, x.col(c), y.col(c));
}

void skew_rank2k_update(MatrixRef a, ConstMatrixRef u, ConstMatrixRef w) {
  for (Index c = 0; c < u.cols(); ++c) skew_rank2_update(a, u.col(c), w.col(c));
}

void gemm(Op op_a, Op op_b, double alpha, ConstMatrixRef a, ConstMatrixRef b, double beta, MatrixRef c) {
  const Index m = c.rows();
  const Index n = c.cols();
  const Index k = op_a == Op::None ? a.cols() : a.rows();
  auto at = [&](Index i, Index p) { return op_a == Op::None ? a(i, p) : a(p, i); };
  auto bt = [&](Index p, Index j) { return op_b == Op::None ? b(p, j) : b(j, p); };
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < m; ++i) {
      double s = 0.0;
      for (Index p = 0; p < k; ++p) s += at(i, p) * bt(p, j);
      c(i, j) = alpha * s + (beta == 0.0 ? 0.0 : beta * c(i, j));
    }
  }
}

}  // namespace skeweig::kernels::serial
