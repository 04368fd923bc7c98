#include "skeweig/tridiag.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <string>

#include "skeweig/errors.hpp"
#include "skeweig/kernels.hpp"

namespace skeweig {

namespace {

using kernels::Op;

double dot(const double* x, const double* y, Index n) {
  double s = 0.0;
  for (Index i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

// u = tau A v + 0.5 tau^2 (v^T A v) v, with p = A v already computed.
void skew_update_vector(std::span<const double> v, std::span<const double> p, double tau, std::span<double> u) {
  const double vtp = dot(v.data(), p.data(), static_cast<Index>(v.size()));
  const double c = 0.5 * tau * tau * vtp;
  for (std::size_t i = 0; i < v.size(); ++i) u[i] = tau * p[i] + c * v[i];
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

OneStepFactorization tridiagonalize_onestep(DenseSkewMatrix a, Index block_size) {
  const Index n = a.size();
  if (block_size < 1) throw ArgumentError("block size must be positive");
  OneStepFactorization f;
  f.trd.n = n;
  f.trd.alpha.assign(static_cast<std::size_t>(std::max<Index>(n - 1, 0)), 0.0);
  f.reflectors = ReflectorSet(n, block_size);
  if (n < 2) return f;

  auto s = a.storage();
  const Index n_refl = n - 2;  // the last column has a single subdiagonal entry
  std::vector<double> taus(static_cast<std::size_t>(n_refl));
  std::vector<double> v(static_cast<std::size_t>(n)), p(v.size()), u(v.size());

  for (Index i = 0; i < n_refl; ++i) {
    const Index m = n - i - 1;
    std::span<double> x(s.col_ptr(i) + i + 1, static_cast<std::size_t>(m));
    const double tau = make_reflector(x);
    taus[static_cast<std::size_t>(i)] = tau;
    f.trd.alpha[static_cast<std::size_t>(i)] = -x[0];
    if (tau == 0.0) continue;

    std::span<double> vv(v.data(), static_cast<std::size_t>(m));
    vv[0] = 1.0;
    std::copy(x.begin() + 1, x.end(), vv.begin() + 1);
    std::span<double> pp(p.data(), vv.size()), uu(u.data(), vv.size());

    auto trailing = s.block(i + 1, i + 1, m, m);
    kernels::skew_matvec(trailing, vv, pp);
    skew_update_vector(vv, pp, tau, uu);
    kernels::skew_rank2_update(trailing, vv, uu);
  }
  f.trd.alpha[static_cast<std::size_t>(n - 2)] = -s(n - 1, n - 2);

  // Reflector i sits below the diagonal of column i with its head at row i + 1.
  for (Index i0 = 0; i0 < n_refl; i0 += block_size) {
    const Index k = std::min(block_size, n_refl - i0);
    const Index row0 = i0 + 1;
    const Index m = n - row0;
    ReflectorBlock blk;
    blk.row0 = row0;
    blk.v = Matrix(m, k);
    blk.tau.assign(taus.begin() + i0, taus.begin() + i0 + k);
    for (Index c = 0; c < k; ++c) {
      blk.v(c, c) = 1.0;
      for (Index r = c + 1; r < m; ++r) blk.v(r, c) = s(row0 + r, i0 + c);
    }
    f.reflectors.push(std::move(blk));
  }
  return f;
}

BandReduction reduce_full_to_band(DenseSkewMatrix a, Index nb) {
  const Index n = a.size();
  if (nb < 1 || nb >= n)
    throw ArgumentError("reduce_full_to_band: need 1 <= nb < n, got nb=" + std::to_string(nb) +
                        " for n=" + std::to_string(n));
  BandReduction out;
  out.reflectors = ReflectorSet(n, nb);
  auto s = a.storage();

  for (Index j = 0;; j += nb) {
    const Index row0 = j + nb;
    const Index m = n - row0;
    if (m < 2) break;
    const Index k = std::min(nb, m - 1);

    // QR of the panel A[row0:n, j:j+nb]; reflector vectors stay in place
    // below the band.
    auto panel = s.block(row0, j, m, nb);
    std::vector<double> taus(static_cast<std::size_t>(k));
    for (Index c = 0; c < k; ++c) {
      std::span<double> x(panel.col_ptr(c) + c, static_cast<std::size_t>(m - c));
      const double tau = make_reflector(x);
      taus[static_cast<std::size_t>(c)] = tau;
      if (tau == 0.0) continue;
      const double beta = x[0];
      x[0] = 1.0;
      for (Index cc = c + 1; cc < nb; ++cc) {
        double* y = panel.col_ptr(cc) + c;
        const double w = tau * dot(x.data(), y, m - c);
        for (Index r = 0; r < m - c; ++r) y[r] -= w * x[r];
      }
      x[0] = beta;
    }

    ReflectorBlock blk;
    blk.row0 = row0;
    blk.v = Matrix(m, k);
    blk.tau = taus;
    for (Index c = 0; c < k; ++c) {
      blk.v(c, c) = 1.0;
      for (Index r = c + 1; r < m; ++r) blk.v(r, c) = panel(r, c);
    }
    blk.t = build_t_factor(blk.v.view(), blk.tau);

    // Two-sided update of the trailing block.
    auto trailing = s.block(row0, row0, m, m);
    Matrix av(m, k);
    kernels::skew_matmat(trailing, blk.v.view(), av.view());
    Matrix u(m, k);  // A V T
    kernels::gemm(Op::None, Op::None, 1.0, av.view(), blk.t.view(), 0.0, u.view());
    Matrix vtu(k, k);
    kernels::gemm(Op::Trans, Op::None, 1.0, blk.v.view(), u.view(), 0.0, vtu.view());
    Matrix small(k, k);  // T^T V^T A V T
    kernels::gemm(Op::Trans, Op::None, 1.0, blk.t.view(), vtu.view(), 0.0, small.view());
    kernels::gemm(Op::None, Op::None, -0.5, blk.v.view(), small.view(), 1.0, u.view());
    kernels::skew_rank2k_update(trailing, blk.v.view(), u.view());

    out.reflectors.push(std::move(blk));
  }

  out.band = BandSkewMatrix(n, nb);
  for (Index j = 0; j < n; ++j)
    for (Index i = j + 1; i <= std::min(n - 1, j + nb); ++i) out.band.lower(i, j) = s(i, j);
  return out;
}

TridiagReduction reduce_band_to_tridiag(const BandSkewMatrix& band) {
  const Index n = band.size();
  const Index b = band.bandwidth();
  TridiagReduction out;
  out.trd.n = n;
  out.trd.alpha.assign(static_cast<std::size_t>(std::max<Index>(n - 1, 0)), 0.0);
  out.reflectors = ReflectorSet(n, 1);
  if (n < 2) return out;
  if (b < 1) return out;

  // Working storage with room for the bulge: entry (i, j), 0 <= i - j <= 2b,
  // lives at work[i + 2b j], so a plain column-major view with leading
  // dimension 2b addresses it as long as only that band is touched.
  const Index ld = 2 * b;
  std::vector<double> work(static_cast<std::size_t>((ld + 1) * n), 0.0);
  MatrixRef a(work.data(), n, n, ld);
  for (Index j = 0; j < n; ++j)
    for (Index i = j + 1; i <= std::min(n - 1, j + b); ++i) a(i, j) = band.lower(i, j);

  std::vector<double> v(static_cast<std::size_t>(b)), p(v.size()), u(v.size()), w(v.size());
  if (b > 1) {
    for (Index j = 0; j + 2 < n; ++j) {
      Index c0 = j;
      Index p0 = j + 1;
      while (p0 < n) {
        const Index m = std::min(b, n - p0);
        if (m < 2) break;
        std::span<double> x(&a(p0, c0), static_cast<std::size_t>(m));
        const double tau = make_reflector(x);
        if (tau != 0.0) {
          std::span<double> vv(v.data(), x.size());
          vv[0] = 1.0;
          std::copy(x.begin() + 1, x.end(), vv.begin() + 1);
          std::fill(x.begin() + 1, x.end(), 0.0);

          // rows [p0, p0+m) of the partially reduced columns left of the window
          for (Index c = c0 + 1; c < p0; ++c) {
            double* col = &a(p0, c);
            const double s = tau * dot(vv.data(), col, m);
            for (Index r = 0; r < m; ++r) col[r] -= s * vv[static_cast<std::size_t>(r)];
          }

          // diagonal block, two-sided
          MatrixRef diag(&a(p0, p0), m, m, ld);
          std::span<double> pp(p.data(), vv.size()), uu(u.data(), vv.size());
          kernels::serial::skew_matvec(diag, vv, pp);
          skew_update_vector(vv, pp, tau, uu);
          kernels::serial::skew_rank2_update(diag, vv, uu);

          // block below the window, from the right; this creates the bulge
          const Index r0 = p0 + m;
          const Index r1 = std::min(n, p0 + m + b);
          if (r1 > r0) {
            std::span<double> ww(w.data(), static_cast<std::size_t>(r1 - r0));
            std::fill(ww.begin(), ww.end(), 0.0);
            for (Index c = 0; c < m; ++c) {
              const double vc = vv[static_cast<std::size_t>(c)];
              const double* col = &a(r0, p0 + c);
              for (Index r = 0; r < r1 - r0; ++r) ww[static_cast<std::size_t>(r)] += col[r] * vc;
            }
            for (Index c = 0; c < m; ++c) {
              const double tv = tau * vv[static_cast<std::size_t>(c)];
              double* col = &a(r0, p0 + c);
              for (Index r = 0; r < r1 - r0; ++r) col[r] -= ww[static_cast<std::size_t>(r)] * tv;
            }
          }

          ReflectorBlock blk;
          blk.row0 = p0;
          blk.v = Matrix(m, 1);
          std::copy(vv.begin(), vv.end(), blk.v.data());
          blk.tau = {tau};
          blk.t = Matrix(1, 1);
          blk.t(0, 0) = tau;
          out.reflectors.push(std::move(blk));
        }
        c0 = p0;
        p0 += b;
      }
    }
  }

  for (Index k = 0; k + 1 < n; ++k) out.trd.alpha[static_cast<std::size_t>(k)] = -a(k + 1, k);
  return out;
}

TwoStepFactorization tridiagonalize_twostep(DenseSkewMatrix a, Index nb) {
  const Index n = a.size();
  if (nb < 1) throw ArgumentError("block size must be positive");
  TwoStepFactorization f;
  f.nb = std::min(nb, std::max<Index>(n - 1, 1));
  if (n < 2) {
    f.trd.n = n;
    f.band_reflectors = ReflectorSet(n, f.nb);
    f.tri_reflectors = ReflectorSet(n, 1);
    return f;
  }
  auto t0 = std::chrono::steady_clock::now();
  auto banded = reduce_full_to_band(std::move(a), f.nb);
  f.seconds_full_to_band = seconds_since(t0);
  t0 = std::chrono::steady_clock::now();
  auto tri = reduce_band_to_tridiag(banded.band);
  f.seconds_band_to_tridiag = seconds_since(t0);
  f.trd = std::move(tri.trd);
  f.band_reflectors = std::move(banded.reflectors);
  f.tri_reflectors = std::move(tri.reflectors);
  return f;
}

ComplexPlanes apply_reflectors(const ReflectorSet& reflectors, ComplexPlanes x, bool transpose) {
  if (x.rows() != reflectors.dimension())
    throw ArgumentError("apply_reflectors: X has " + std::to_string(x.rows()) + " rows, expected " +
                        std::to_string(reflectors.dimension()));
  reflectors.apply(x, transpose);
  return x;
}

}  // namespace skeweig
