#include "skeweig/reflectors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "skeweig/errors.hpp"
#include "skeweig/kernels.hpp"

namespace skeweig {

namespace {

constexpr Index kChunk = 16;

// Applies H = I - tau v v^T to columns [c0, c1) of rows [row0, row0 + len).
void apply_single(const double* v, double tau, Index len, Index row0, MatrixRef x, Index c0, Index c1) {
  if (tau == 0.0) return;
  for (Index c = c0; c < c1; ++c) {
    double* col = x.col_ptr(c) + row0;
    double s = 0.0;
    for (Index i = 0; i < len; ++i) s += v[i] * col[i];
    s *= tau;
    for (Index i = 0; i < len; ++i) col[i] -= s * v[i];
  }
}

// A run of single-reflector blocks. Each thread carries its own column chunk
// through the whole run, so the short reflectors stay in cache.
void apply_run(std::span<const ReflectorBlock* const> run, MatrixRef x) {
  const Index cols = x.cols();
  const Index n_chunks = (cols + kChunk - 1) / kChunk;
#pragma omp parallel for schedule(dynamic, 1) if (n_chunks > 1)
  for (Index ch = 0; ch < n_chunks; ++ch) {
    const Index c0 = ch * kChunk;
    const Index c1 = std::min(cols, c0 + kChunk);
    for (const ReflectorBlock* b : run) apply_single(b->v.data(), b->tau[0], b->rows(), b->row0, x, c0, c1);
  }
}

// (I - V T V^T) X or (I - V T^T V^T) X on rows [row0, row0 + m).
void apply_wy(const ReflectorBlock& b, MatrixRef x, bool transpose) {
  const Index m = b.rows();
  const Index k = b.count();
  const Index cols = x.cols();
  auto sub = x.block(b.row0, 0, m, cols);
  Matrix w(k, cols);
  kernels::gemm(kernels::Op::Trans, kernels::Op::None, 1.0, b.v.view(), sub, 0.0, w.view());

#pragma omp parallel for schedule(static) if (cols >= 64)
  for (Index c = 0; c < cols; ++c) {
    double* wc = w.col(c).data();
    if (!transpose) {
      for (Index i = 0; i < k; ++i) {
        double s = 0.0;
        for (Index p = i; p < k; ++p) s += b.t(i, p) * wc[p];
        wc[i] = s;
      }
    } else {
      for (Index i = k - 1; i >= 0; --i) {
        double s = 0.0;
        for (Index p = 0; p <= i; ++p) s += b.t(p, i) * wc[p];
        wc[i] = s;
      }
    }
  }

  kernels::gemm(kernels::Op::None, kernels::Op::None, -1.0, b.v.view(), w.view(), 1.0, sub);
}

}  // namespace

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  if (std::isfinite(s) && s > std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon())
    return std::sqrt(s);
  double scale = 0.0;
  for (double v : x) scale = std::max(scale, std::abs(v));
  if (scale == 0.0 || !std::isfinite(scale)) return scale;
  s = 0.0;
  for (double v : x) s += (v / scale) * (v / scale);
  return scale * std::sqrt(s);
}

double make_reflector(std::span<double> x) {
  if (x.empty()) throw ArgumentError("householder: empty vector");
  const double alpha = x[0];
  const double xnorm = norm2(x.subspan(1));
  if (xnorm == 0.0) return 0.0;
  const double beta = (alpha >= 0.0 ? -1.0 : 1.0) * std::hypot(alpha, xnorm);
  const double tau = (beta - alpha) / beta;
  const double scale = 1.0 / (alpha - beta);
  for (std::size_t i = 1; i < x.size(); ++i) x[i] *= scale;
  x[0] = beta;
  return tau;
}

Householder householder(std::span<const double> x) {
  if (x.empty()) throw ArgumentError("householder: empty vector");
  Householder h;
  h.v.assign(x.begin(), x.end());
  h.tau = make_reflector(h.v);
  h.beta = h.v[0];
  h.v[0] = 1.0;
  if (h.tau == 0.0) std::fill(h.v.begin() + 1, h.v.end(), 0.0);
  return h;
}

Matrix build_t_factor(ConstMatrixRef v, std::span<const double> tau) {
  const Index m = v.rows();
  const Index k = v.cols();
  Matrix t(k, k);
  std::vector<double> w(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) {
    const double ti = tau[static_cast<std::size_t>(i)];
    t(i, i) = ti;
    if (ti == 0.0) continue;
    // w = -tau_i V(:, 0:i)^T v_i; v_i vanishes above row i
    for (Index j = 0; j < i; ++j) {
      double s = 0.0;
      for (Index r = i; r < m; ++r) s += v(r, j) * v(r, i);
      w[static_cast<std::size_t>(j)] = -ti * s;
    }
    for (Index r = 0; r < i; ++r) {
      double s = 0.0;
      for (Index p = r; p < i; ++p) s += t(r, p) * w[static_cast<std::size_t>(p)];
      t(r, i) = s;
    }
  }
  return t;
}

Index ReflectorSet::reflector_count() const {
  Index total = 0;
  for (const auto& b : blocks_) total += b.count();
  return total;
}

void ReflectorSet::push(ReflectorBlock block) {
  if (block.row0 < 0 || block.row0 + block.rows() > n_)
    throw ArgumentError("reflector block does not fit the reflector set dimension");
  if (static_cast<Index>(block.tau.size()) != block.count())
    throw ArgumentError("reflector block needs one tau per vector");
  if (block.t.rows() == 0 && block.count() > 0) block.t = build_t_factor(block.v.view(), block.tau);
  blocks_.push_back(std::move(block));
}

void ReflectorSet::apply(MatrixRef x, bool transpose) const {
  if (x.rows() != n_) throw ArgumentError("apply_reflectors: row count does not match the reflector dimension");
  if (x.cols() == 0 || blocks_.empty()) return;

  // Q X applies the blocks last to first; Q^T X first to last.
  std::vector<const ReflectorBlock*> order;
  order.reserve(blocks_.size());
  for (const auto& b : blocks_) order.push_back(&b);
  if (!transpose) std::reverse(order.begin(), order.end());

  std::size_t i = 0;
  while (i < order.size()) {
    if (order[i]->count() == 1) {
      std::size_t j = i;
      while (j < order.size() && order[j]->count() == 1) ++j;
      apply_run(std::span(order).subspan(i, j - i), x);
      i = j;
    } else {
      if (order[i]->count() > 0) apply_wy(*order[i], x, transpose);
      ++i;
    }
  }
}

void ReflectorSet::apply(ComplexPlanes& x, bool transpose) const {
  apply(x.re.view(), transpose);
  apply(x.im.view(), transpose);
}

Matrix ReflectorSet::materialize() const {
  Matrix q = Matrix::identity(n_);
  apply(q.view(), false);
  return q;
}

}  // namespace skeweig
