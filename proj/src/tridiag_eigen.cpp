#include "skeweig/tridiag_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "skeweig/errors.hpp"
#include "skeweig/kernels.hpp"

namespace skeweig {

namespace {

constexpr Index kLeaf = 16;
constexpr double kUnitRoundoff = std::numeric_limits<double>::epsilon() / 2;
constexpr double kSafeMin = std::numeric_limits<double>::min();

void check_input(const SymTridiagonal& t) {
  const Index n = t.size();
  if (n < 1) throw ArgumentError("tridiagonal matrix must have dimension >= 1");
  if (static_cast<Index>(t.e.size()) != n - 1)
    throw ArgumentError("off-diagonal length " + std::to_string(t.e.size()) + " does not match dimension " +
                        std::to_string(n));
  for (double v : t.d)
    if (!std::isfinite(v)) throw ArgumentError("tridiagonal matrix has a non-finite diagonal entry");
  for (double v : t.e)
    if (!std::isfinite(v)) throw ArgumentError("tridiagonal matrix has a non-finite off-diagonal entry");
}

// ---------------------------------------------------------------------------
// secular equation  1/beta + sum_j z_j^2 / (d_j - lambda) = 0
// ---------------------------------------------------------------------------

struct SecularRoot {
  Index origin;  // pole the root is measured from
  double mu;     // lambda = d[origin] + mu
};

struct SecularValue {
  double w;
  double psi_lo, dpsi_lo;  // poles 0..i
  double psi_hi, dpsi_hi;  // poles i+1..K-1
};

SecularValue secular_eval(std::span<const double> d, std::span<const double> z, double inv_beta, Index i,
                          Index origin, double mu) {
  SecularValue s{0.0, 0.0, 0.0, 0.0, 0.0};
  const double base = d[static_cast<std::size_t>(origin)];
  for (std::size_t j = 0; j < d.size(); ++j) {
    const double del = (d[j] - base) - mu;
    const double t = z[j] / del;
    if (static_cast<Index>(j) <= i) {
      s.psi_lo += z[j] * t;
      s.dpsi_lo += t * t;
    } else {
      s.psi_hi += z[j] * t;
      s.dpsi_hi += t * t;
    }
  }
  s.w = inv_beta + s.psi_lo + s.psi_hi;
  return s;
}

// Root i of the secular equation, i = 0..K-1, lying in (d_i, d_{i+1}) or,
// for the last one, in (d_{K-1}, d_{K-1} + beta |z|^2]. d ascending, beta > 0.
//
// The iteration models the two sides of the pole pair by one pole each
// (matching value and slope at the current point), takes the root of that
// model, and falls back to bisection whenever the step leaves the bracket.
SecularRoot secular_root(std::span<const double> d, std::span<const double> z, double beta, Index i) {
  const Index k = static_cast<Index>(d.size());
  const double inv_beta = 1.0 / beta;
  const bool has_upper = i + 1 < k;

  Index origin = i;
  double lo = 0.0;
  double hi = 0.0;
  if (has_upper) {
    const double gap = d[static_cast<std::size_t>(i + 1)] - d[static_cast<std::size_t>(i)];
    const auto mid = secular_eval(d, z, inv_beta, i, i, 0.5 * gap);
    if (mid.w >= 0.0) {
      lo = 0.0;
      hi = 0.5 * gap;
    } else {
      origin = i + 1;
      lo = -0.5 * gap;
      hi = 0.0;
    }
  } else {
    double zz = 0.0;
    for (double v : z) zz += v * v;
    hi = beta * zz;
    while (secular_eval(d, z, inv_beta, i, i, hi).w < 0.0) hi *= 2.0;
  }

  const double base = d[static_cast<std::size_t>(origin)];
  const double del_lo0 = d[static_cast<std::size_t>(i)] - base;
  const double del_hi0 = has_upper ? d[static_cast<std::size_t>(i + 1)] - base : 0.0;

  double mu = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const auto s = secular_eval(d, z, inv_beta, i, origin, mu);
    if (s.w == 0.0) break;
    if (s.w < 0.0)
      lo = mu;
    else
      hi = mu;
    const double err = 8.0 * kUnitRoundoff * (inv_beta + std::abs(s.psi_lo) + std::abs(s.psi_hi));
    if (std::abs(s.w) <= err) break;
    if (hi - lo <= 2.0 * kUnitRoundoff * std::max(std::abs(lo), std::abs(hi))) break;

    const double dl = del_lo0 - mu;  // d_i - lambda < 0
    const double du = del_hi0 - mu;  // d_{i+1} - lambda > 0
    double eta = std::numeric_limits<double>::quiet_NaN();
    const double c = s.w - dl * s.dpsi_lo - (has_upper ? du * s.dpsi_hi : 0.0);
    const double b1 = s.dpsi_lo * dl * dl;
    if (has_upper) {
      // c (dl - eta)(du - eta) + b1 (du - eta) + b2 (dl - eta) = 0
      const double b2 = s.dpsi_hi * du * du;
      const double qa = c;
      const double qb = c * (dl + du) + b1 + b2;
      const double qc = dl * du * s.w;
      auto inside = [&](double e) { return std::isfinite(e) && e > dl && e < du; };
      if (qa == 0.0) {
        eta = qc / qb;
      } else {
        const double disc = std::sqrt(std::max(qb * qb - 4.0 * qa * qc, 0.0));
        const double q = 0.5 * (qb >= 0.0 ? qb + disc : qb - disc);
        const double r1 = q / qa;
        const double r2 = q != 0.0 ? qc / q : std::numeric_limits<double>::quiet_NaN();
        const bool in1 = inside(r1);
        const bool in2 = inside(r2);
        if (in1 && in2)
          eta = std::abs(r1) < std::abs(r2) ? r1 : r2;
        else if (in1)
          eta = r1;
        else if (in2)
          eta = r2;
      }
    } else if (c > 0.0) {
      // c (dl - eta) + b1 = 0
      eta = dl + b1 / c;
    }

    double next = mu + eta;
    if (!std::isfinite(next) || next <= lo || next >= hi || iter % 8 == 7) next = 0.5 * (lo + hi);
    if (next == mu) break;
    mu = next;
  }
  return {origin, mu};
}

// ---------------------------------------------------------------------------
// merge step
// ---------------------------------------------------------------------------

struct MergeResult {
  std::vector<double> values;  // all n eigenvalues, ascending
  Matrix vectors;              // eigenvectors for sorted positions [lo, hi)
};

// Eigen decomposition of blockdiag(Q1 D1 Q1^T, Q2 D2 Q2^T) + rho w w^T with
// w = e_{m-1} + e_m. On entry d holds D1, D2 (each ascending) and q the
// block diagonal Q; q's columns may be rotated in place.
MergeResult merge(std::span<const double> d_in, MatrixRef q, Index m, double rho, Index want_lo, Index want_hi) {
  const Index n = static_cast<Index>(d_in.size());
  std::vector<double> d(d_in.begin(), d_in.end());

  std::vector<double> z(static_cast<std::size_t>(n));
  const double sgn = rho >= 0.0 ? 1.0 : -1.0;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (Index i = 0; i < m; ++i) z[static_cast<std::size_t>(i)] = q(m - 1, i) * inv_sqrt2;
  for (Index i = m; i < n; ++i) z[static_cast<std::size_t>(i)] = sgn * q(m, i) * inv_sqrt2;
  const double beta = 2.0 * std::abs(rho);

  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  std::stable_sort(perm.begin(), perm.end(),
                   [&](Index a, Index b) { return d[static_cast<std::size_t>(a)] < d[static_cast<std::size_t>(b)]; });

  std::vector<double> ds(perm.size()), zs(perm.size());
  std::vector<int> type(perm.size());  // bit 0: nonzero in the top block, bit 1: bottom block
  for (std::size_t k = 0; k < perm.size(); ++k) {
    ds[k] = d[static_cast<std::size_t>(perm[k])];
    zs[k] = z[static_cast<std::size_t>(perm[k])];
    type[k] = perm[k] < m ? 1 : 2;
  }

  double dmax = 0.0;
  for (double v : ds) dmax = std::max(dmax, std::abs(v));
  const double tol = 8.0 * kUnitRoundoff * (beta + dmax);

  // Deflation. A component with beta |z| <= tol drops out with its pole as
  // eigenvalue; two poles close enough that a Givens rotation can zero one
  // z component (|(d_k - d_p) c s| <= tol) are merged the same way.
  std::vector<std::size_t> kept;      // positions in sorted order
  std::vector<std::size_t> deflated;  // positions in sorted order
  std::ptrdiff_t pj = -1;
  for (std::size_t k = 0; k < ds.size(); ++k) {
    if (beta * std::abs(zs[k]) <= tol) {
      deflated.push_back(k);
      continue;
    }
    if (pj < 0) {
      pj = static_cast<std::ptrdiff_t>(k);
      continue;
    }
    const auto p = static_cast<std::size_t>(pj);
    double s = zs[p];
    double c = zs[k];
    const double tau = std::hypot(c, s);
    const double t = ds[k] - ds[p];
    c /= tau;
    s = -s / tau;
    if (std::abs(t * c * s) <= tol) {
      zs[k] = tau;
      zs[p] = 0.0;
      double* x = q.col_ptr(perm[p]);
      double* y = q.col_ptr(perm[k]);
      for (Index r = 0; r < n; ++r) {
        const double xr = x[r];
        const double yr = y[r];
        x[r] = c * xr + s * yr;
        y[r] = c * yr - s * xr;
      }
      type[k] = type[p] = type[k] | type[p];
      const double dp = ds[p] * c * c + ds[k] * s * s;
      ds[k] = ds[p] * s * s + ds[k] * c * c;
      ds[p] = dp;
      deflated.push_back(p);
    } else {
      kept.push_back(p);
    }
    pj = static_cast<std::ptrdiff_t>(k);
  }
  if (pj >= 0) kept.push_back(static_cast<std::size_t>(pj));

  const Index nk = static_cast<Index>(kept.size());
  std::vector<double> poles(kept.size()), zk(kept.size());
  for (std::size_t j = 0; j < kept.size(); ++j) {
    poles[j] = ds[kept[j]];
    zk[j] = zs[kept[j]];
  }

  // Secular roots and the differences delta(j, i) = d_j - lambda_i.
  std::vector<double> lambda(kept.size());
  Matrix delta(nk, nk);
#pragma omp parallel for schedule(dynamic, 16) if (nk > 128)
  for (Index i = 0; i < nk; ++i) {
    const auto root = secular_root(poles, zk, beta, i);
    const double base = poles[static_cast<std::size_t>(root.origin)];
    lambda[static_cast<std::size_t>(i)] = base + root.mu;
    for (Index j = 0; j < nk; ++j) delta(j, i) = (poles[static_cast<std::size_t>(j)] - base) - root.mu;
  }

  // Gu-Eisenstat: recompute z from the computed roots so that the
  // eigenvectors of the rank-one problem come out numerically orthogonal.
  std::vector<double> zhat(kept.size());
  for (Index j = 0; j < nk; ++j) {
    double w = -delta(j, j);
    for (Index i = 0; i < nk; ++i) {
      if (i == j) continue;
      w *= -delta(j, i) / (poles[static_cast<std::size_t>(i)] - poles[static_cast<std::size_t>(j)]);
    }
    zhat[static_cast<std::size_t>(j)] = std::copysign(std::sqrt(std::abs(w)), zk[static_cast<std::size_t>(j)]);
  }

  // Sorted spectrum: undeflated roots plus deflated poles.
  struct Source {
    double value;
    bool root;
    std::size_t index;  // root number or sorted position of a deflated pole
  };
  std::vector<Source> all;
  all.reserve(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < lambda.size(); ++i) all.push_back({lambda[i], true, i});
  for (std::size_t k : deflated) all.push_back({ds[k], false, k});
  std::stable_sort(all.begin(), all.end(), [](const Source& a, const Source& b) { return a.value < b.value; });

  MergeResult out;
  out.values.reserve(all.size());
  for (const auto& s : all) out.values.push_back(s.value);
  out.vectors = Matrix(n, want_hi - want_lo);

  // Selected roots: columns of the rank-one eigenvector matrix.
  std::vector<Index> sel_pos, sel_root;
  for (Index c = want_lo; c < want_hi; ++c) {
    const auto& s = all[static_cast<std::size_t>(c)];
    if (s.root) {
      sel_pos.push_back(c - want_lo);
      sel_root.push_back(static_cast<Index>(s.index));
    } else {
      const double* src = q.col_ptr(perm[s.index]);
      std::copy(src, src + n, out.vectors.col(c - want_lo).data());
    }
  }
  const Index ns = static_cast<Index>(sel_root.size());
  if (ns == 0) return out;

  Matrix v(nk, ns);
  for (Index c = 0; c < ns; ++c) {
    const Index i = sel_root[static_cast<std::size_t>(c)];
    double nrm = 0.0;
    for (Index j = 0; j < nk; ++j) {
      const double x = zhat[static_cast<std::size_t>(j)] / delta(j, i);
      v(j, c) = x;
      nrm += x * x;
    }
    nrm = 1.0 / std::sqrt(nrm);
    for (Index j = 0; j < nk; ++j) v(j, c) *= nrm;
  }

  // Q_new = Q(:, kept) V, computed separately for the top m rows and the
  // bottom n - m rows using only the columns that are nonzero there.
  Matrix prod;
  for (int half = 0; half < 2; ++half) {
    const int bit = half == 0 ? 1 : 2;
    const Index r0 = half == 0 ? 0 : m;
    const Index nr = half == 0 ? m : n - m;
    std::vector<Index> cols;
    for (Index j = 0; j < nk; ++j)
      if (type[kept[static_cast<std::size_t>(j)]] & bit) cols.push_back(j);
    if (cols.empty()) continue;
    const Index nc = static_cast<Index>(cols.size());
    Matrix qs(nr, nc), vs(nc, ns);
    for (Index c = 0; c < nc; ++c) {
      const Index j = cols[static_cast<std::size_t>(c)];
      const double* src = q.col_ptr(perm[kept[static_cast<std::size_t>(j)]]) + r0;
      std::copy(src, src + nr, qs.col(c).data());
      for (Index s = 0; s < ns; ++s) vs(c, s) = v(j, s);
    }
    prod = Matrix(nr, ns);
    kernels::gemm(kernels::Op::None, kernels::Op::None, 1.0, qs.view(), vs.view(), 0.0, prod.view());
    for (Index s = 0; s < ns; ++s) {
      double* dst = out.vectors.col(sel_pos[static_cast<std::size_t>(s)]).data() + r0;
      std::copy(prod.col(s).begin(), prod.col(s).end(), dst);
    }
  }
  return out;
}

// Full eigen decomposition of the (scaled) subproblem: d <- eigenvalues
// ascending, q <- eigenvectors.
void solve_subproblem(std::span<double> d, std::span<const double> e, MatrixRef q, int depth) {
  const Index n = static_cast<Index>(d.size());
  if (n <= kLeaf) {
    std::vector<double> dd(d.begin(), d.end());
    Matrix qq;
    ql_implicit(dd, std::vector<double>(e.begin(), e.end()), qq);
    std::copy(dd.begin(), dd.end(), d.begin());
    for (Index j = 0; j < n; ++j)
      for (Index i = 0; i < n; ++i) q(i, j) = qq(i, j);
    return;
  }

  const Index m = n / 2;
  const double rho = e[static_cast<std::size_t>(m - 1)];
  d[static_cast<std::size_t>(m - 1)] -= std::abs(rho);
  d[static_cast<std::size_t>(m)] -= std::abs(rho);
  for (Index j = m; j < n; ++j)
    for (Index i = 0; i < m; ++i) q(i, j) = 0.0;
  for (Index j = 0; j < m; ++j)
    for (Index i = m; i < n; ++i) q(i, j) = 0.0;

  auto left = [&] { solve_subproblem(d.first(static_cast<std::size_t>(m)), e.first(static_cast<std::size_t>(m - 1)), q.block(0, 0, m, m), depth + 1); };
  auto right = [&] {
    solve_subproblem(d.subspan(static_cast<std::size_t>(m)), e.subspan(static_cast<std::size_t>(m)),
                     q.block(m, m, n - m, n - m), depth + 1);
  };
  if (depth < 4 && n > 256) {
#pragma omp task default(shared)
    left();
#pragma omp task default(shared)
    right();
#pragma omp taskwait
  } else {
    left();
    right();
  }

  auto merged = merge(d, q, m, rho, 0, n);
  std::copy(merged.values.begin(), merged.values.end(), d.begin());
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) q(i, j) = merged.vectors(i, j);
}

}  // namespace

Matrix SymTridiagonal::materialize() const {
  const Index n = size();
  Matrix m(n, n);
  for (Index i = 0; i < n; ++i) m(i, i) = d[static_cast<std::size_t>(i)];
  for (Index i = 0; i + 1 < n; ++i) {
    m(i + 1, i) = e[static_cast<std::size_t>(i)];
    m(i, i + 1) = e[static_cast<std::size_t>(i)];
  }
  return m;
}

void ql_implicit(std::vector<double>& d, std::vector<double> e_in, Matrix& q) {
  const Index n = static_cast<Index>(d.size());
  q = Matrix::identity(n);
  if (n <= 1) return;
  std::vector<double> e(static_cast<std::size_t>(n), 0.0);
  std::copy(e_in.begin(), e_in.begin() + (n - 1), e.begin());
  auto D = [&](Index i) -> double& { return d[static_cast<std::size_t>(i)]; };
  auto E = [&](Index i) -> double& { return e[static_cast<std::size_t>(i)]; };

  const double eps = std::numeric_limits<double>::epsilon();
  double f = 0.0;
  double tst1 = 0.0;
  for (Index l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(D(l)) + std::abs(E(l)));
    Index m = l;
    while (m < n - 1 && std::abs(E(m)) > eps * tst1) ++m;

    if (m > l) {
      int iter = 0;
      do {
        if (++iter > 60) throw NumericalError("implicit QL did not converge");
        double g = D(l);
        double p = (D(l + 1) - g) / (2.0 * E(l));
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        D(l) = E(l) / (p + r);
        D(l + 1) = E(l) * (p + r);
        const double dl1 = D(l + 1);
        double h = g - D(l);
        for (Index i = l + 2; i < n; ++i) D(i) -= h;
        f += h;

        p = D(m);
        double c = 1.0, c2 = 1.0, c3 = 1.0;
        const double el1 = E(l + 1);
        double s = 0.0, s2 = 0.0;
        for (Index i = m - 1; i >= l; --i) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * E(i);
          h = c * p;
          r = std::hypot(p, E(i));
          E(i + 1) = s * r;
          s = E(i) / r;
          c = p / r;
          p = c * D(i) - s * g;
          D(i + 1) = h + s * (c * g + s * D(i));
          double* qi = q.col(i).data();
          double* qi1 = q.col(i + 1).data();
          for (Index k = 0; k < n; ++k) {
            h = qi1[k];
            qi1[k] = s * qi[k] + c * h;
            qi[k] = c * qi[k] - s * h;
          }
        }
        p = -s * s2 * c3 * el1 * E(l) / dl1;
        E(l) = s * p;
        D(l) = c * p;
      } while (std::abs(E(l)) > eps * tst1);
    }
    D(l) += f;
    E(l) = 0.0;
  }

  // selection sort keeps the column swaps simple
  for (Index i = 0; i < n - 1; ++i) {
    Index k = i;
    for (Index j = i + 1; j < n; ++j)
      if (D(j) < D(k)) k = j;
    if (k != i) {
      std::swap(D(i), D(k));
      std::swap_ranges(q.col(i).begin(), q.col(i).end(), q.col(k).begin());
    }
  }
}

TridiagEigen dc_eigen(const SymTridiagonal& t, EigenSelection want) {
  check_input(t);
  const Index n = t.size();
  Index lo = 0, hi = n;
  switch (want.kind) {
    case EigenSelection::Kind::All:
      break;
    case EigenSelection::Kind::None:
      lo = hi = 0;
      break;
    case EigenSelection::Kind::Range:
      if (want.lo < 1 || want.lo > want.hi || want.hi > n)
        throw ArgumentError("eigenvector range [" + std::to_string(want.lo) + ", " + std::to_string(want.hi) +
                            "] is outside [1, " + std::to_string(n) + "]");
      lo = want.lo - 1;
      hi = want.hi;
      break;
  }

  TridiagEigen out;
  out.first = lo;

  double scale = 0.0;
  for (double v : t.d) scale = std::max(scale, std::abs(v));
  for (double v : t.e) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) {
    out.lambda.assign(static_cast<std::size_t>(n), 0.0);
    out.vectors = Matrix(n, hi - lo);
    for (Index c = lo; c < hi; ++c) out.vectors(c, c - lo) = 1.0;
    return out;
  }

  std::vector<double> d(t.d), e(t.e);
  for (auto& v : d) v /= scale;
  for (auto& v : e) v /= scale;

  if (n <= kLeaf) {
    Matrix q;
    ql_implicit(d, e, q);
    out.vectors = Matrix(n, hi - lo);
    for (Index c = lo; c < hi; ++c)
      std::copy(q.col(c).begin(), q.col(c).end(), out.vectors.col(c - lo).begin());
  } else {
    // Same as solve_subproblem, except that the final merge only forms the
    // requested eigenvectors.
    const Index m = n / 2;
    const double rho = e[static_cast<std::size_t>(m - 1)];
    d[static_cast<std::size_t>(m - 1)] -= std::abs(rho);
    d[static_cast<std::size_t>(m)] -= std::abs(rho);
    Matrix q(n, n);
    std::span<double> ds(d);
    std::span<const double> es(e);
#pragma omp parallel if (n > 256)
#pragma omp single
    {
#pragma omp task default(shared)
      solve_subproblem(ds.first(static_cast<std::size_t>(m)), es.first(static_cast<std::size_t>(m - 1)),
                       q.block(0, 0, m, m), 1);
#pragma omp task default(shared)
      solve_subproblem(ds.subspan(static_cast<std::size_t>(m)), es.subspan(static_cast<std::size_t>(m)),
                       q.block(m, m, n - m, n - m), 1);
#pragma omp taskwait
    }
    auto merged = merge(d, q.view(), m, rho, lo, hi);
    d = std::move(merged.values);
    out.vectors = std::move(merged.vectors);
  }

  for (auto& v : d) v *= scale;
  out.lambda = std::move(d);
  return out;
}

std::vector<double> bisection_eigenvalues(const SymTridiagonal& t, Index k_lo, Index k_hi) {
  check_input(t);
  const Index n = t.size();
  if (k_lo < 1 || k_lo > k_hi || k_hi > n)
    throw ArgumentError("eigenvalue range [" + std::to_string(k_lo) + ", " + std::to_string(k_hi) +
                        "] is outside [1, " + std::to_string(n) + "]");

  const auto& d = t.d;
  const auto& e = t.e;
  double emax2 = 0.0;
  for (double v : e) emax2 = std::max(emax2, v * v);
  const double pivmin = kSafeMin * std::max(1.0, emax2);

  double gl = std::numeric_limits<double>::infinity();
  double gu = -gl;
  double tnorm = 0.0;
  for (Index i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(e[static_cast<std::size_t>(i - 1)]);
    if (i + 1 < n) r += std::abs(e[static_cast<std::size_t>(i)]);
    const double di = d[static_cast<std::size_t>(i)];
    gl = std::min(gl, di - r);
    gu = std::max(gu, di + r);
    tnorm = std::max(tnorm, std::abs(di) + r);
  }
  const double widen = 2.0 * kUnitRoundoff * static_cast<double>(n) * tnorm + 2.0 * pivmin;
  gl -= widen;
  gu += widen;
  const double tol = 4.0 * kUnitRoundoff * std::max(1.0, tnorm);

  // number of eigenvalues smaller than x
  auto count_below = [&](double x) {
    Index count = 0;
    double q = d[0] - x;
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0.0) ++count;
    for (Index i = 1; i < n; ++i) {
      const double ei = e[static_cast<std::size_t>(i - 1)];
      q = d[static_cast<std::size_t>(i)] - x - ei * ei / q;
      if (std::abs(q) < pivmin) q = -pivmin;
      if (q < 0.0) ++count;
    }
    return count;
  };

  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(k_hi - k_lo + 1));
  for (Index k = k_lo; k <= k_hi; ++k) {
    double lo = gl;
    double hi = gu;
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (count_below(mid) >= k)
        hi = mid;
      else
        lo = mid;
    }
    out.push_back(0.5 * (lo + hi));
  }
  return out;
}

}  // namespace skeweig
