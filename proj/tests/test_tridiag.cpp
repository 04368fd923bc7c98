#include <doctest.h>

#include "oracles.hpp"
#include "skeweig/errors.hpp"
#include "skeweig/matrix.hpp"
#include "skeweig/reflectors.hpp"
#include "skeweig/tridiag.hpp"

using namespace skeweig;
using oracle::eps;

namespace {

// Q = B_0 B_1 ... with every reflector formed as an explicit dense matrix.
Matrix explicit_q(const ReflectorSet& set) {
  const Index n = set.dimension();
  Matrix q = Matrix::identity(n);
  for (const auto& b : set.blocks()) {
    for (Index c = 0; c < b.count(); ++c) {
      Matrix h = Matrix::identity(n);
      const double tau = b.tau[static_cast<std::size_t>(c)];
      for (Index j = 0; j < b.rows(); ++j)
        for (Index i = 0; i < b.rows(); ++i) h(b.row0 + i, b.row0 + j) -= tau * b.v(i, c) * b.v(j, c);
      q = oracle::matmul(q, h);
    }
  }
  return q;
}

Matrix similarity(const Matrix& q, const Matrix& a) {
  return oracle::matmul(oracle::transpose(q), oracle::matmul(a, q));
}

void check_tridiagonalization(const DenseSkewMatrix& a, const SkewTridiagonal& t, const Matrix& q) {
  const Index n = a.size();
  const double tol = 50.0 * n * eps;
  CHECK(oracle::frob_diff(similarity(q, a.materialize()), t.materialize()) <= tol * a.frobenius_norm());
  CHECK(oracle::orthogonality_defect(q) <= tol);
}

}  // namespace

TEST_CASE("householder: 3-4-5") {
  auto h = householder(std::vector<double>{3.0, 4.0});
  CHECK(h.beta == -5.0);
  CHECK(h.v[0] == 1.0);
  const double vx = h.v[0] * 3.0 + h.v[1] * 4.0;
  const double y0 = 3.0 - h.tau * vx * h.v[0];
  const double y1 = 4.0 - h.tau * vx * h.v[1];
  CHECK(std::abs(y0 + 5.0) <= 4 * eps);
  CHECK(std::abs(y1) <= 4 * eps);
}

TEST_CASE("householder: trivial and sign conventions") {
  auto h = householder(std::vector<double>{2.5, 0.0, 0.0});
  CHECK(h.tau == 0.0);
  CHECK(h.beta == 2.5);
  CHECK(h.v == std::vector<double>{1.0, 0.0, 0.0});

  auto z = householder(std::vector<double>{0.0, 2.0});
  CHECK(z.beta == doctest::Approx(-2.0).epsilon(1e-15));
  auto nz = householder(std::vector<double>{-0.0, 2.0});
  CHECK(nz.beta < 0.0);
  auto neg = householder(std::vector<double>{-1.0, 1.0});
  CHECK(neg.beta > 0.0);

  auto one = householder(std::vector<double>{-7.0});
  CHECK(one.tau == 0.0);
  CHECK(one.beta == -7.0);

  CHECK_THROWS_AS(householder(std::vector<double>{}), ArgumentError);
}

TEST_CASE("householder: random vector against the explicit reflector") {
  auto x = random_uniform(9, 11);
  auto h = householder(x);
  Matrix hm = Matrix::identity(9);
  for (Index j = 0; j < 9; ++j)
    for (Index i = 0; i < 9; ++i) hm(i, j) -= h.tau * h.v[static_cast<std::size_t>(i)] * h.v[static_cast<std::size_t>(j)];
  CHECK(oracle::orthogonality_defect(hm) <= 8 * 9 * eps);
  const double nx = norm2(x);
  CHECK(std::abs(std::abs(h.beta) - nx) <= 4 * eps * nx);
  CHECK(h.beta * x[0] <= 0.0);
  for (Index i = 0; i < 9; ++i) {
    double y = 0.0;
    for (Index j = 0; j < 9; ++j) y += hm(i, j) * x[static_cast<std::size_t>(j)];
    CHECK(std::abs(y - (i == 0 ? h.beta : 0.0)) <= 8 * 9 * eps * nx);
  }
}

TEST_CASE("compact-WY factor reproduces the product of its reflectors") {
  const Index m = 40, k = 8;
  Matrix panel(m, k);
  auto r = random_uniform(static_cast<std::size_t>(m * k), 5);
  std::copy(r.begin(), r.end(), panel.data());
  ReflectorBlock blk;
  blk.row0 = 0;
  blk.v = Matrix(m, k);
  for (Index c = 0; c < k; ++c) {
    std::vector<double> x(static_cast<std::size_t>(m - c));
    for (Index i = c; i < m; ++i) x[static_cast<std::size_t>(i - c)] = panel(i, c);
    auto h = householder(x);
    blk.tau.push_back(h.tau);
    for (Index i = c; i < m; ++i) blk.v(i, c) = h.v[static_cast<std::size_t>(i - c)];
  }
  blk.t = build_t_factor(blk.v.view(), blk.tau);
  for (Index j = 0; j < k; ++j)
    for (Index i = j + 1; i < k; ++i) CHECK(blk.t(i, j) == 0.0);

  ReflectorSet set(m, k);
  set.push(blk);
  Matrix wy = Matrix::identity(m);
  Matrix vt = oracle::matmul(blk.v, blk.t);
  Matrix vtvt = oracle::matmul(vt, oracle::transpose(blk.v));
  for (Index j = 0; j < m; ++j)
    for (Index i = 0; i < m; ++i) wy(i, j) -= vtvt(i, j);
  CHECK(oracle::orthogonality_defect(wy) <= 100.0 * k * eps);
  CHECK(oracle::frob_diff(wy, explicit_q(set)) <= 100.0 * k * eps);
  CHECK(oracle::frob_diff(set.materialize(), explicit_q(set)) <= 100.0 * k * eps);
}

TEST_CASE("one-step tridiagonalization") {
  for (Index n : {1, 2, 3, 7, 32, 129}) {
    CAPTURE(n);
    auto a = random_skew(n, 13 + static_cast<std::uint64_t>(n));
    auto f = tridiagonalize_onestep(a, 8);
    CHECK(f.trd.n == n);
    CHECK(static_cast<Index>(f.trd.alpha.size()) == std::max<Index>(n - 1, 0));
    CHECK(f.reflectors.reflector_count() == std::max<Index>(n - 2, 0));
    auto q = explicit_q(f.reflectors);
    check_tridiagonalization(a, f.trd, q);
    CHECK(oracle::frob_diff(q, f.reflectors.materialize()) <= 50.0 * n * eps);
  }
}

TEST_CASE("full-to-band reduction") {
  for (auto [n, nb] : {std::pair<Index, Index>{7, 1}, {7, 3}, {32, 4}, {65, 8}, {100, 16}}) {
    CAPTURE(n);
    CAPTURE(nb);
    auto a = random_skew(n, 17);
    auto r = reduce_full_to_band(a, nb);
    CHECK(r.band.bandwidth() == nb);
    auto q = explicit_q(r.reflectors);
    const double tol = 50.0 * n * eps;
    CHECK(oracle::frob_diff(similarity(q, a.materialize()), r.band.materialize()) <= tol * a.frobenius_norm());
    CHECK(oracle::orthogonality_defect(q) <= tol);
  }
  auto a = random_skew(5, 1);
  CHECK_THROWS_AS(reduce_full_to_band(a, 5), ArgumentError);
  CHECK_THROWS_AS(reduce_full_to_band(a, 0), ArgumentError);
}

TEST_CASE("band-to-tridiagonal bulge chasing") {
  for (auto [n, b] : {std::pair<Index, Index>{2, 1}, {9, 2}, {30, 3}, {64, 8}, {70, 16}}) {
    CAPTURE(n);
    CAPTURE(b);
    auto full = random_skew(n, 19);
    BandSkewMatrix band(n, b);
    for (Index j = 0; j < n; ++j)
      for (Index i = j + 1; i <= std::min(n - 1, j + b); ++i) band.lower(i, j) = full.lower(i, j);
    auto r = reduce_band_to_tridiag(band);
    auto q = explicit_q(r.reflectors);
    const double tol = 50.0 * n * eps;
    const double norm = oracle::frob(band.materialize());
    CHECK(oracle::frob_diff(similarity(q, band.materialize()), r.trd.materialize()) <= tol * norm);
    CHECK(oracle::orthogonality_defect(q) <= tol);
  }
}

TEST_CASE("two-step tridiagonalization") {
  for (Index n : {2, 7, 32, 129}) {
    for (Index nb : {1, 4, 64}) {
      CAPTURE(n);
      CAPTURE(nb);
      auto a = random_skew(n, 23);
      auto f = tridiagonalize_twostep(a, nb);
      CHECK(f.nb == std::min(nb, n - 1));
      auto q = oracle::matmul(explicit_q(f.band_reflectors), explicit_q(f.tri_reflectors));
      check_tridiagonalization(a, f.trd, q);
      CHECK(f.seconds_full_to_band >= 0.0);
      CHECK(f.seconds_band_to_tridiag >= 0.0);
    }
  }
}

TEST_CASE("two-step with nb = 1 reproduces the one-step coefficients up to sign") {
  auto a = random_skew(40, 29);
  auto one = tridiagonalize_onestep(a);
  auto two = tridiagonalize_twostep(a, 1);
  REQUIRE(one.trd.alpha.size() == two.trd.alpha.size());
  for (std::size_t k = 0; k < one.trd.alpha.size(); ++k)
    CHECK(std::abs(std::abs(one.trd.alpha[k]) - std::abs(two.trd.alpha[k])) <= 50 * 40 * eps * a.frobenius_norm());
}

TEST_CASE("apply_reflectors matches the explicit orthogonal matrix") {
  auto a = random_skew(50, 31);
  auto f = tridiagonalize_twostep(a, 6);
  const Matrix q = oracle::matmul(explicit_q(f.band_reflectors), explicit_q(f.tri_reflectors));
  ComplexPlanes x(50, 5);
  auto r = random_uniform(500, 3);
  std::copy(r.begin(), r.begin() + 250, x.re.data());
  std::copy(r.begin() + 250, r.end(), x.im.data());

  auto y = apply_reflectors(f.band_reflectors, apply_reflectors(f.tri_reflectors, x));
  CHECK(oracle::frob_diff(y.re, oracle::matmul(q, x.re)) <= 50 * 50 * eps * oracle::frob(x.re));
  CHECK(oracle::frob_diff(y.im, oracle::matmul(q, x.im)) <= 50 * 50 * eps * oracle::frob(x.im));

  auto z = apply_reflectors(f.tri_reflectors, apply_reflectors(f.band_reflectors, x, true), true);
  CHECK(oracle::frob_diff(z.re, oracle::matmul(oracle::transpose(q), x.re)) <= 50 * 50 * eps * oracle::frob(x.re));

  CHECK_THROWS_AS(apply_reflectors(f.tri_reflectors, ComplexPlanes(49, 1)), ArgumentError);
}
