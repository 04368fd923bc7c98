#include "skeweig/bse.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "skeweig/errors.hpp"
#include "skeweig/kernels.hpp"

namespace skeweig {

namespace {

constexpr double kUnitRoundoff = std::numeric_limits<double>::epsilon() / 2;

using kernels::Op;

double frob(const ComplexPlanes& x) {
  double s = 0.0;
  for (Index j = 0; j < x.cols(); ++j)
    for (Index i = 0; i < x.rows(); ++i) s += x.re(i, j) * x.re(i, j) + x.im(i, j) * x.im(i, j);
  return std::sqrt(s);
}

// || X - X^H || (conjugate) or || X - X^T || (plain)
double transpose_defect(const ComplexPlanes& x, bool conjugate) {
  const double sg = conjugate ? -1.0 : 1.0;
  double s = 0.0;
  for (Index j = 0; j < x.cols(); ++j)
    for (Index i = 0; i < x.rows(); ++i) {
      const double dr = x.re(i, j) - x.re(j, i);
      const double di = x.im(i, j) - sg * x.im(j, i);
      s += dr * dr + di * di;
    }
  return std::sqrt(s);
}

// C <- X Y for complex X, Y.
ComplexPlanes complex_product(const ComplexPlanes& x, const ComplexPlanes& y) {
  ComplexPlanes c(x.rows(), y.cols());
  kernels::gemm(Op::None, Op::None, 1.0, x.re.view(), y.re.view(), 0.0, c.re.view());
  kernels::gemm(Op::None, Op::None, -1.0, x.im.view(), y.im.view(), 1.0, c.re.view());
  kernels::gemm(Op::None, Op::None, 1.0, x.re.view(), y.im.view(), 0.0, c.im.view());
  kernels::gemm(Op::None, Op::None, 1.0, x.im.view(), y.re.view(), 1.0, c.im.view());
  return c;
}

}  // namespace

void validate(const BSEHamiltonian& h) {
  const Index n = h.size();
  if (n < 1) throw ArgumentError("BSE blocks must have dimension >= 1");
  if (h.a.cols() != n || h.b.rows() != n || h.b.cols() != n)
    throw ArgumentError("BSE blocks A and B must both be square of the same size");
  const double tol = 8.0 * kUnitRoundoff;
  const double da = transpose_defect(h.a, true);
  if (!(da <= tol * frob(h.a))) throw ValidationError("block A is not Hermitian");
  const double db = transpose_defect(h.b, false);
  if (!(db <= tol * frob(h.b))) throw ValidationError("block B is not symmetric");
}

Matrix build_m(const BSEHamiltonian& h) {
  validate(h);
  const Index n = h.size();
  Matrix m(2 * n, 2 * n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) {
      const double ar = h.a.re(i, j), ai = h.a.im(i, j);
      const double br = h.b.re(i, j), bi = h.b.im(i, j);
      m(i, j) = ar + br;
      m(i, n + j) = ai - bi;
      m(n + i, j) = -(ai + bi);
      m(n + i, n + j) = ar - br;
    }
  for (Index j = 0; j < 2 * n; ++j)
    for (Index i = j + 1; i < 2 * n; ++i) {
      const double v = 0.5 * (m(i, j) + m(j, i));
      m(i, j) = v;
      m(j, i) = v;
    }
  return m;
}

Matrix cholesky(const Matrix& m) {
  if (m.rows() != m.cols()) throw ArgumentError("cholesky needs a square matrix");
  const Index n = m.rows();
  double maxdiag = 0.0;
  for (Index i = 0; i < n; ++i) maxdiag = std::max(maxdiag, m(i, i));
  const double tol = static_cast<double>(n) * kUnitRoundoff * maxdiag;

  Matrix l(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = j; i < n; ++i) l(i, j) = m(i, j);

  // left-looking: column j receives the updates of columns 0..j-1
  for (Index j = 0; j < n; ++j) {
    double* cj = l.col(j).data();
    for (Index k = 0; k < j; ++k) {
      const double f = l(j, k);
      if (f == 0.0) continue;
      const double* ck = l.col(k).data();
      for (Index i = j; i < n; ++i) cj[i] -= f * ck[i];
    }
    const double pivot = cj[j];
    if (!(pivot > tol)) throw NotDefiniteError(j + 1, pivot);
    const double d = std::sqrt(pivot);
    cj[j] = d;
    for (Index i = j + 1; i < n; ++i) cj[i] /= d;
  }
  return l;
}

DenseSkewMatrix form_w(const Matrix& l) {
  if (l.rows() != l.cols()) throw ArgumentError("form_w needs a square factor");
  const Index n2 = l.rows();
  if (n2 % 2 != 0) throw ArgumentError("form_w needs an even dimension, got " + std::to_string(n2));
  const Index n = n2 / 2;
  // W = L_t^T L_b - L_b^T L_t with L_t, L_b the top and bottom row halves;
  // with G = L_t^T L_b this is W = G - G^T.
  Matrix g(n2, n2);
  kernels::gemm(Op::Trans, Op::None, 1.0, l.block(0, 0, n, n2), l.block(n, 0, n, n2), 0.0, g.view());
  DenseSkewMatrix w(n2);
  for (Index j = 0; j < n2; ++j)
    for (Index i = j + 1; i < n2; ++i) w.lower(i, j) = g(i, j) - g(j, i);
  return w;
}

BSEDecomposition solve_bse(const BSEHamiltonian& h, SolverOptions opts, StageTimes* times) {
  const Index n = h.size();
  Matrix m = build_m(h);
  Matrix l = cholesky(m);
  DenseSkewMatrix w = form_w(l);

  opts.fraction = 0.5;
  auto e = solve_skew_eigen(w, opts, times);

  // W z = i lambda z  =>  H (J L z) = -i lambda (J L z) for H = -J L L^T,
  // and since Q^H H_BS Q = i H for Q = [[I, -iI], [I, iI]] / sqrt 2, x = Q J L z solves H_BS x = lambda x.
  const Index k = e.vectors.cols();
  ComplexPlanes u(2 * n, k);
  kernels::gemm(Op::None, Op::None, 1.0, l.view(), e.vectors.re.view(), 0.0, u.re.view());
  kernels::gemm(Op::None, Op::None, 1.0, l.view(), e.vectors.im.view(), 0.0, u.im.view());

  BSEDecomposition out;
  out.lambda = e.lambda;
  out.vectors = ComplexPlanes(2 * n, k);
  const double r = 1.0 / std::sqrt(2.0);
  for (Index j = 0; j < k; ++j) {
    double nrm = 0.0;
    for (Index i = 0; i < n; ++i) {
      // y = J u: y1 = u_bottom, y2 = -u_top
      const double a1 = u.re(n + i, j), b1 = u.im(n + i, j);
      const double a2 = -u.re(i, j), b2 = -u.im(i, j);
      // x_top = (y1 - i y2) / sqrt 2, x_bottom = (y1 + i y2) / sqrt 2
      out.vectors.re(i, j) = r * (a1 + b2);
      out.vectors.im(i, j) = r * (b1 - a2);
      out.vectors.re(n + i, j) = r * (a1 - b2);
      out.vectors.im(n + i, j) = r * (b1 + a2);
    }
    for (Index i = 0; i < 2 * n; ++i)
      nrm += out.vectors.re(i, j) * out.vectors.re(i, j) + out.vectors.im(i, j) * out.vectors.im(i, j);
    nrm = nrm > 0.0 ? 1.0 / std::sqrt(nrm) : 0.0;
    for (Index i = 0; i < 2 * n; ++i) {
      out.vectors.re(i, j) *= nrm;
      out.vectors.im(i, j) *= nrm;
    }
  }
  normalize_phase(out.vectors);
  return out;
}

BSEHamiltonian random_definite_bse(Index n, std::uint64_t seed, double margin) {
  if (n < 1) throw ArgumentError("BSE block dimension must be >= 1");
  if (!(margin > 0.0)) throw ArgumentError("margin must be positive");
  const auto nn = static_cast<std::size_t>(n * n);
  auto r = random_uniform(4 * nn, seed);
  ComplexPlanes c(2 * n, 2 * n);
  std::size_t at = 0;
  for (int part = 0; part < 4; ++part) {
    for (Index j = 0; j < n; ++j)
      for (Index i = 0; i < n; ++i) {
        const double v = r[at++];
        switch (part) {
          case 0:  // Re C1
            c.re(i, j) = v;
            c.re(n + i, n + j) = v;
            break;
          case 1:  // Im C1
            c.im(i, j) = v;
            c.im(n + i, n + j) = -v;
            break;
          case 2:  // Re C2
            c.re(i, n + j) = v;
            c.re(n + i, j) = v;
            break;
          default:  // Im C2
            c.im(i, n + j) = v;
            c.im(n + i, j) = -v;
            break;
        }
      }
  }
  // Omega = C^H C + margin I
  ComplexPlanes ch(2 * n, 2 * n);
  for (Index j = 0; j < 2 * n; ++j)
    for (Index i = 0; i < 2 * n; ++i) {
      ch.re(i, j) = c.re(j, i);
      ch.im(i, j) = -c.im(j, i);
    }
  ComplexPlanes omega = complex_product(ch, c);

  BSEHamiltonian h{ComplexPlanes(n, n), ComplexPlanes(n, n)};
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) {
      h.a.re(i, j) = 0.5 * (omega.re(i, j) + omega.re(j, i));
      h.a.im(i, j) = 0.5 * (omega.im(i, j) - omega.im(j, i));
      h.b.re(i, j) = 0.5 * (omega.re(i, n + j) + omega.re(j, n + i));
      h.b.im(i, j) = 0.5 * (omega.im(i, n + j) + omega.im(j, n + i));
    }
  for (Index i = 0; i < n; ++i) h.a.re(i, i) += margin;
  return h;
}

ComplexPlanes materialize_hbs(const BSEHamiltonian& h) {
  const Index n = h.size();
  ComplexPlanes x(2 * n, 2 * n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) {
      x.re(i, j) = h.a.re(i, j);
      x.im(i, j) = h.a.im(i, j);
      x.re(i, n + j) = h.b.re(i, j);
      x.im(i, n + j) = h.b.im(i, j);
      x.re(n + i, j) = -h.b.re(i, j);
      x.im(n + i, j) = h.b.im(i, j);
      x.re(n + i, n + j) = -h.a.re(i, j);
      x.im(n + i, n + j) = h.a.im(i, j);
    }
  return x;
}

double hbs_frobenius_norm(const BSEHamiltonian& h) {
  const double a = frob(h.a), b = frob(h.b);
  return std::sqrt(2.0 * (a * a + b * b));
}

double bse_max_residual(const BSEHamiltonian& h, const BSEDecomposition& d) {
  const Index n = h.size();
  if (d.vectors.rows() != 2 * n || static_cast<Index>(d.lambda.size()) != d.vectors.cols())
    throw ArgumentError("decomposition shape does not match the Hamiltonian");
  auto hx = complex_product(materialize_hbs(h), d.vectors);
  double worst = 0.0;
  for (Index j = 0; j < d.vectors.cols(); ++j) {
    const double lam = d.lambda[static_cast<std::size_t>(j)];
    double s = 0.0;
    for (Index i = 0; i < 2 * n; ++i) {
      const double rr = hx.re(i, j) - lam * d.vectors.re(i, j);
      const double ri = hx.im(i, j) - lam * d.vectors.im(i, j);
      s += rr * rr + ri * ri;
    }
    worst = std::max(worst, std::sqrt(s));
  }
  return worst;
}

}  // namespace skeweig
