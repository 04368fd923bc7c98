#include "skeweig/skew_solver.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <limits>

#include "skeweig/errors.hpp"
#include "skeweig/kernels.hpp"
#include "skeweig/tridiag.hpp"
#include "skeweig/tridiag_eigen.hpp"

namespace skeweig {

namespace {

constexpr double kUnitRoundoff = std::numeric_limits<double>::epsilon() / 2;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

void check_options(const SolverOptions& opts) {
  if (!(opts.fraction > 0.0 && opts.fraction <= 1.0))
    throw ArgumentError("fraction must lie in (0, 1], got " + std::to_string(opts.fraction));
  if (opts.nb < 1) throw ArgumentError("block size must be at least 1, got " + std::to_string(opts.nb));
  if (opts.workers < 0) throw ArgumentError("worker count must be nonnegative");
}

void check_finite(const DenseSkewMatrix& a) {
  auto s = a.storage();
  for (Index j = 0; j < a.size(); ++j)
    for (Index i = j + 1; i < a.size(); ++i)
      if (!std::isfinite(s(i, j))) throw ArgumentError("matrix has a non-finite entry");
}

// Y = A X for complex X, both planes at once.
ComplexPlanes skew_times(const DenseSkewMatrix& a, const ComplexPlanes& x) {
  ComplexPlanes y(x.rows(), x.cols());
  kernels::skew_matmat(a.storage(), x.re.view(), y.re.view());
  kernels::skew_matmat(a.storage(), x.im.view(), y.im.view());
  return y;
}

}  // namespace

std::string to_string(Flavor f) { return f == Flavor::OneStep ? "one-step" : "two-step"; }

Flavor parse_flavor(const std::string& s) {
  if (s == "one-step") return Flavor::OneStep;
  if (s == "two-step") return Flavor::TwoStep;
  throw ArgumentError("unknown flavor '" + s + "' (expected one-step or two-step)");
}

WorkerScope::WorkerScope(int workers) {
  if (workers > 0) {
    previous_ = omp_get_max_threads();
    omp_set_num_threads(workers);
    active_ = true;
  }
}

WorkerScope::~WorkerScope() {
  if (active_) omp_set_num_threads(previous_);
}

ComplexPlanes apply_D(ConstMatrixRef x) {
  ComplexPlanes out(x.rows(), x.cols());
  for (Index j = 0; j < x.cols(); ++j) {
    for (Index k = 0; k < x.rows(); ++k) {
      const double v = x(k, j);
      switch (k % 4) {
        case 0: out.re(k, j) = v; break;
        case 1: out.im(k, j) = v; break;
        case 2: out.re(k, j) = -v; break;
        default: out.im(k, j) = -v; break;
      }
    }
  }
  return out;
}

double symmetrization_check(std::span<const double> alpha) {
  using C = std::complex<double>;
  const Index n = static_cast<Index>(alpha.size()) + 1;
  static const C powers[4] = {C(1, 0), C(0, 1), C(-1, 0), C(0, -1)};
  auto t_skew = [&](Index i, Index j) -> double {
    if (j == i + 1) return alpha[static_cast<std::size_t>(i)];
    if (i == j + 1) return -alpha[static_cast<std::size_t>(j)];
    return 0.0;
  };
  auto t_sym = [&](Index i, Index j) -> double {
    if (j == i + 1) return alpha[static_cast<std::size_t>(i)];
    if (i == j + 1) return alpha[static_cast<std::size_t>(j)];
    return 0.0;
  };
  double s = 0.0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const C lhs = C(0, -1) * std::conj(powers[i % 4]) * t_skew(i, j) * powers[j % 4];
      s += std::norm(lhs - t_sym(i, j));
    }
  }
  return std::sqrt(s);
}

Index eigenpair_count(Index n, double fraction) {
  const auto c = static_cast<Index>(std::ceil(fraction * static_cast<double>(n) - 1e-12));
  return std::clamp<Index>(c, 1, n);
}

void normalize_phase(ComplexPlanes& x) {
  for (Index j = 0; j < x.cols(); ++j) {
    Index p = 0;
    double best = -1.0;
    for (Index i = 0; i < x.rows(); ++i) {
      const double m = std::hypot(x.re(i, j), x.im(i, j));
      if (m > best) {
        best = m;
        p = i;
      }
    }
    if (best <= 0.0) continue;
    // multiply by conj(x_p) / |x_p|
    const double c = x.re(p, j) / best;
    const double s = -x.im(p, j) / best;
    for (Index i = 0; i < x.rows(); ++i) {
      const double re = x.re(i, j);
      const double im = x.im(i, j);
      x.re(i, j) = re * c - im * s;
      x.im(i, j) = re * s + im * c;
    }
    x.re(p, j) = best;
    x.im(p, j) = 0.0;
  }
}

EigenDecomposition solve_skew_eigen(const DenseSkewMatrix& a, const SolverOptions& opts, StageTimes* times) {
  check_options(opts);
  const Index n = a.size();
  if (n < 1) throw ArgumentError("matrix dimension must be at least 1");
  check_finite(a);
  WorkerScope scope(opts.workers);

  StageTimes st;
  const auto t_start = Clock::now();

  // 1. tridiagonalization
  SkewTridiagonal trd;
  // back transformation applies `first`, then `second`
  ReflectorSet first(n, 1), second(n, 1);
  auto t0 = Clock::now();
  if (opts.flavor == Flavor::OneStep) {
    auto f = tridiagonalize_onestep(a, opts.nb);
    trd = std::move(f.trd);
    first = std::move(f.reflectors);
  } else {
    auto f = tridiagonalize_twostep(a, opts.nb);
    trd = std::move(f.trd);
    first = std::move(f.tri_reflectors);
    second = std::move(f.band_reflectors);
    st.full_to_band = f.seconds_full_to_band;
    st.band_to_tridiag = f.seconds_band_to_tridiag;
  }
  st.tridiagonalize = seconds_since(t0);

  // 2. symmetric tridiagonal problem with zero diagonal and off-diagonal alpha
  t0 = Clock::now();
  const Index count = eigenpair_count(n, opts.fraction);
  SymTridiagonal sym{std::vector<double>(static_cast<std::size_t>(n), 0.0), trd.alpha};
  auto te = dc_eigen(sym, EigenSelection::range(n - count + 1, n));
  st.tridiag_solve = seconds_since(t0);

  EigenDecomposition out;
  out.half = count <= (n + 1) / 2;
  const double norm2 = std::max(std::abs(te.lambda.front()), std::abs(te.lambda.back()));
  const double clamp = 100.0 * static_cast<double>(n) * kUnitRoundoff * norm2;
  out.lambda.resize(static_cast<std::size_t>(count));
  Matrix qd(n, count);
  for (Index k = 0; k < count; ++k) {
    const Index src = count - 1 - k;  // descending
    double v = te.lambda[static_cast<std::size_t>(n - count + src)];
    if (std::abs(v) <= clamp) v = 0.0;
    out.lambda[static_cast<std::size_t>(k)] = v;
    std::copy(te.vectors.col(src).begin(), te.vectors.col(src).end(), qd.col(k).begin());
  }

  // 3-4. back transformation
  t0 = Clock::now();
  out.vectors = apply_D(qd.view());
  first.apply(out.vectors);
  second.apply(out.vectors);
  normalize_phase(out.vectors);
  st.back_transform = seconds_since(t0);

  st.total = seconds_since(t_start);
  if (times) *times = st;
  return out;
}

EigenDecomposition expand_half_spectrum(const EigenDecomposition& e) {
  if (!e.half) throw ArgumentError("expand_half_spectrum needs a half-spectrum decomposition");
  std::vector<Index> positive;
  for (Index k = static_cast<Index>(e.lambda.size()) - 1; k >= 0; --k)
    if (e.lambda[static_cast<std::size_t>(k)] > 0.0) positive.push_back(k);

  const Index n = e.vectors.rows();
  const Index c0 = e.vectors.cols();
  EigenDecomposition out;
  out.half = false;
  out.lambda = e.lambda;
  out.vectors = ComplexPlanes(n, c0 + static_cast<Index>(positive.size()));
  for (Index j = 0; j < c0; ++j) {
    std::copy(e.vectors.re.col(j).begin(), e.vectors.re.col(j).end(), out.vectors.re.col(j).begin());
    std::copy(e.vectors.im.col(j).begin(), e.vectors.im.col(j).end(), out.vectors.im.col(j).begin());
  }
  Index j = c0;
  for (Index k : positive) {
    out.lambda.push_back(-e.lambda[static_cast<std::size_t>(k)]);
    std::copy(e.vectors.re.col(k).begin(), e.vectors.re.col(k).end(), out.vectors.re.col(j).begin());
    auto src = e.vectors.im.col(k);
    auto dst = out.vectors.im.col(j);
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = -src[i];
    ++j;
  }
  return out;
}

ResidualMetrics residual_report(const DenseSkewMatrix& a, const EigenDecomposition& e, bool with_oracle) {
  const Index n = a.size();
  const Index k = e.vectors.cols();
  if (e.vectors.rows() != n || static_cast<Index>(e.lambda.size()) != k)
    throw ArgumentError("decomposition shape does not match the matrix");

  ResidualMetrics m;
  m.norm_a = a.frobenius_norm();

  auto aq = skew_times(a, e.vectors);
  for (Index j = 0; j < k; ++j) {
    const double lam = e.lambda[static_cast<std::size_t>(j)];
    double s = 0.0;
    for (Index i = 0; i < n; ++i) {
      const double r_re = aq.re(i, j) + lam * e.vectors.im(i, j);
      const double r_im = aq.im(i, j) - lam * e.vectors.re(i, j);
      s += r_re * r_re + r_im * r_im;
    }
    m.max_residual = std::max(m.max_residual, std::sqrt(s));
  }
  m.relative_residual = m.norm_a > 0.0 ? m.max_residual / m.norm_a : m.max_residual;

  // Q^H Q = (Re^T Re + Im^T Im) + i (Re^T Im - Im^T Re)
  using kernels::Op;
  Matrix g_re(k, k), g_im(k, k);
  kernels::gemm(Op::Trans, Op::None, 1.0, e.vectors.re.view(), e.vectors.re.view(), 0.0, g_re.view());
  kernels::gemm(Op::Trans, Op::None, 1.0, e.vectors.im.view(), e.vectors.im.view(), 1.0, g_re.view());
  kernels::gemm(Op::Trans, Op::None, 1.0, e.vectors.re.view(), e.vectors.im.view(), 0.0, g_im.view());
  kernels::gemm(Op::Trans, Op::None, -1.0, e.vectors.im.view(), e.vectors.re.view(), 1.0, g_im.view());
  double u = 0.0;
  for (Index j = 0; j < k; ++j)
    for (Index i = 0; i < k; ++i) {
      const double d = g_re(i, j) - (i == j ? 1.0 : 0.0);
      u += d * d + g_im(i, j) * g_im(i, j);
    }
  m.unitarity = std::sqrt(u);

  if (k == n && !e.half) {
    std::vector<double> sorted(e.lambda);
    std::sort(sorted.begin(), sorted.end());
    double p = 0.0;
    for (Index i = 0; i < n; ++i)
      p = std::max(p, std::abs(sorted[static_cast<std::size_t>(i)] + sorted[static_cast<std::size_t>(n - 1 - i)]));
    m.pairing = p;
  }

  if (with_oracle && k > 0) {
    auto f = tridiagonalize_onestep(a);
    SymTridiagonal sym{std::vector<double>(static_cast<std::size_t>(n), 0.0), f.trd.alpha};
    auto all = bisection_eigenvalues(sym, 1, n);  // ascending
    std::vector<double> got(e.lambda);
    std::sort(got.begin(), got.end(), std::greater<>());
    double gap = 0.0;
    if (k <= n) {
      // compare with the k largest
      for (Index j = 0; j < k; ++j)
        gap = std::max(gap, std::abs(got[static_cast<std::size_t>(j)] - all[static_cast<std::size_t>(n - 1 - j)]));
    }
    m.oracle_gap = gap;
  }
  return m;
}

}  // namespace skeweig
