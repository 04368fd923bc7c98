#include <doctest.h>
#include <omp.h>

#include <filesystem>
#include <sstream>

#include "oracles.hpp"
#include "skeweig/errors.hpp"
#include "skeweig/kernels.hpp"
#include "skeweig/matrix.hpp"
#include "skeweig/mmio.hpp"
#include "skeweig/reflectors.hpp"

using namespace skeweig;
using oracle::eps;

namespace {

std::vector<double> dense_matvec(const Matrix& a, const std::vector<double>& x) {
  std::vector<double> y(static_cast<std::size_t>(a.rows()), 0.0);
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i) y[static_cast<std::size_t>(i)] += a(i, j) * x[static_cast<std::size_t>(j)];
  return y;
}

double vnorm(const std::vector<double>& x) { return norm2(x); }

struct ThreadCount {
  int saved;
  explicit ThreadCount(int n) : saved(omp_get_max_threads()) { omp_set_num_threads(n); }
  ~ThreadCount() { omp_set_num_threads(saved); }
};

Matrix random_matrix(Index r, Index c, std::uint64_t seed) {
  auto v = random_uniform(static_cast<std::size_t>(r * c), seed);
  Matrix m(r, c);
  std::copy(v.begin(), v.end(), m.data());
  return m;
}

}  // namespace

TEST_CASE("skew_matvec: small cases") {
  DenseSkewMatrix a(2);
  a.lower(1, 0) = -2.0;
  auto y = skew_matvec(a, std::vector<double>{1.0, 0.0});
  CHECK(y == std::vector<double>{0.0, -2.0});

  auto r = random_skew(8, 42);
  auto z = skew_matvec(r, std::vector<double>(8, 0.0));
  CHECK(z == std::vector<double>(8, 0.0));

  std::vector<double> e1(8, 0.0);
  e1[0] = 1.0;
  auto col = skew_matvec(r, e1);
  auto full = r.materialize();
  for (Index i = 0; i < 8; ++i) CHECK(col[static_cast<std::size_t>(i)] == full(i, 0));

  CHECK_THROWS_AS(skew_matvec(r, std::vector<double>(7)), ArgumentError);
}

TEST_CASE("skew_matvec agrees with the dense product and has a vanishing quadratic form") {
  for (Index n : {1, 5, 64, 300, 512}) {
    auto a = random_skew(n, 100 + static_cast<std::uint64_t>(n));
    auto x = random_uniform(static_cast<std::size_t>(n), 7);
    auto y = skew_matvec(a, x);
    auto ref = dense_matvec(a.materialize(), x);
    double diff = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) diff = std::max(diff, std::abs(y[i] - ref[i]));
    const double bound = 8.0 * n * eps * a.frobenius_norm() * vnorm(x);
    CHECK(diff <= bound);
    double q = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) q += x[i] * y[i];
    CHECK(std::abs(q) <= 8.0 * n * eps * a.frobenius_norm() * vnorm(x) * vnorm(x));
  }
}

TEST_CASE("skew_rank2_update") {
  DenseSkewMatrix a(2);
  skew_rank2_update(a, std::vector<double>{1, 0}, std::vector<double>{0, 1});
  auto m = a.materialize();
  CHECK(m(0, 1) == 1.0);
  CHECK(m(1, 0) == -1.0);
  CHECK(m(0, 0) == 0.0);
  CHECK(m(1, 1) == 0.0);

  auto b = random_skew(10, 3);
  const auto before = b;
  auto u = random_uniform(10, 4);
  skew_rank2_update(b, u, u);
  CHECK(b == before);

  CHECK_THROWS_AS(skew_rank2_update(b, std::vector<double>(9), u), ArgumentError);
}

TEST_CASE("skew_rank2_update matches the dense update") {
  const Index n = 16;
  auto a = random_skew(n, 7);
  auto uv = random_uniform(2 * n, 7);
  std::vector<double> u(uv.begin(), uv.begin() + n), v(uv.begin() + n, uv.end());
  Matrix ref = a.materialize();
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i)
      ref(i, j) += -v[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(j)] +
                   u[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(j)];
  const double tol = 16 * eps * (a.frobenius_norm() + vnorm(u) * vnorm(v));
  skew_rank2_update(a, u, v);
  auto got = a.materialize();
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) CHECK(std::abs(got(i, j) - ref(i, j)) <= tol);
}

TEST_CASE("random_skew") {
  auto one = random_skew(1, 99);
  CHECK(one.size() == 1);
  CHECK(one.materialize()(0, 0) == 0.0);

  CHECK(random_skew(4, 1) == random_skew(4, 1));
  CHECK_FALSE(random_skew(4, 1) == random_skew(4, 2));

  auto big = random_skew(100, 3);
  auto m = big.materialize();
  for (Index j = 0; j < 100; ++j)
    for (Index i = 0; i < 100; ++i) {
      CHECK(m(i, j) == -m(j, i));
      CHECK(m(i, j) >= -1.0);
      CHECK(m(i, j) < 1.0);
    }
  CHECK_THROWS_AS(random_skew(0, 1), ArgumentError);
}

TEST_CASE("band and tridiagonal materialization") {
  BandSkewMatrix band(5, 2);
  band.lower(2, 0) = 3.0;
  band.lower(1, 0) = -1.0;
  auto m = band.materialize();
  CHECK(m(2, 0) == 3.0);
  CHECK(m(0, 2) == -3.0);
  CHECK(m(3, 0) == 0.0);
  CHECK(band(0, 1) == 1.0);

  SkewTridiagonal t{3, {1.0, 2.0}};
  auto tm = t.materialize();
  CHECK(tm(0, 1) == 1.0);
  CHECK(tm(1, 0) == -1.0);
  CHECK(tm(1, 2) == 2.0);
  CHECK(tm(2, 1) == -2.0);
  CHECK(tm(0, 2) == 0.0);
}

TEST_CASE("parallel kernels agree with the serial reference") {
  ThreadCount threads(4);
  for (Index n : {3, 70, 300}) {
    auto a = random_skew(n, 5);
    auto x = random_uniform(static_cast<std::size_t>(n), 6);
    std::vector<double> y1(x.size()), y2(x.size()), y3(x.size());
    kernels::serial::skew_matvec(a.storage(), x, y1);
    kernels::skew_matvec(a.storage(), x, y2);
    kernels::skew_matvec(a.storage(), x, y3);
    CHECK(y2 == y3);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(y1[i] - y2[i]) <= 8 * n * eps * a.frobenius_norm());

    auto u = random_uniform(static_cast<std::size_t>(n), 8);
    auto s = a;
    auto p = a;
    kernels::serial::skew_rank2_update(s.storage(), u, x);
    kernels::skew_rank2_update(p.storage(), u, x);
    CHECK(s == p);

    const Index k = 19;
    Matrix xm = random_matrix(n, k, 9);
    Matrix ys(n, k), yp(n, k), yq(n, k);
    kernels::serial::skew_matmat(a.storage(), xm.view(), ys.view());
    kernels::skew_matmat(a.storage(), xm.view(), yp.view());
    kernels::skew_matmat(a.storage(), xm.view(), yq.view());
    CHECK(yp == yq);
    CHECK(oracle::frob_diff(ys, yp) <= 8 * n * eps * a.frobenius_norm() * oracle::frob(xm));

    Matrix um = random_matrix(n, k, 10), wm = random_matrix(n, k, 11);
    auto s2 = a;
    auto p2 = a;
    kernels::serial::skew_rank2k_update(s2.storage(), um.view(), wm.view());
    kernels::skew_rank2k_update(p2.storage(), um.view(), wm.view());
    CHECK(oracle::frob_diff(s2.materialize(), p2.materialize()) <=
          8 * k * eps * (a.frobenius_norm() + oracle::frob(um) * oracle::frob(wm)));
  }
}

TEST_CASE("gemm agrees with the serial reference for every transpose combination") {
  ThreadCount threads(4);
  using kernels::Op;
  for (auto [m, n, k] : {std::tuple<Index, Index, Index>{1, 1, 1}, {7, 5, 3}, {130, 97, 260}, {300, 70, 300}}) {
    for (Op oa : {Op::None, Op::Trans})
      for (Op ob : {Op::None, Op::Trans}) {
        Matrix a = oa == Op::None ? random_matrix(m, k, 1) : random_matrix(k, m, 1);
        Matrix b = ob == Op::None ? random_matrix(k, n, 2) : random_matrix(n, k, 2);
        Matrix c0 = random_matrix(m, n, 3);
        Matrix c1 = c0, c2 = c0;
        kernels::serial::gemm(oa, ob, 0.75, a.view(), b.view(), -0.5, c1.view());
        kernels::gemm(oa, ob, 0.75, a.view(), b.view(), -0.5, c2.view());
        CHECK(oracle::frob_diff(c1, c2) <= 4 * k * eps * (oracle::frob(a) * oracle::frob(b) + oracle::frob(c0)));
      }
  }
}

TEST_CASE("Matrix Market: skew round trip is bit exact") {
  auto a = random_skew(8, 5);
  std::stringstream ss;
  io::write_skew_matrix(ss, a);
  auto b = io::read_skew_matrix(ss);
  CHECK(a == b);
}

TEST_CASE("Matrix Market: reading skew files") {
  {
    std::istringstream in("%%MatrixMarket matrix coordinate real skew-symmetric\n2 2 1\n2 1 -3\n");
    auto m = io::read_skew_matrix(in).materialize();
    CHECK(m(0, 1) == 3.0);
    CHECK(m(1, 0) == -3.0);
  }
  {
    std::istringstream in("%%MatrixMarket matrix coordinate real skew-symmetric\n2 2 1\n1 1 1\n");
    CHECK_THROWS_AS(io::read_skew_matrix(in), ValidationError);
  }
  {
    std::istringstream in("%%MatrixMarket matrix array real general\n2 2\n0\n-3\n3\n0\n");
    auto m = io::read_skew_matrix(in).materialize();
    CHECK(m(0, 1) == 3.0);
  }
  {
    std::istringstream in("%%MatrixMarket matrix array real general\n2 2\n0\n-3\n2\n0\n");
    CHECK_THROWS_AS(io::read_skew_matrix(in), ValidationError);
  }
  {
    std::istringstream in("%%MatrixMarket matrix coordinate real general\n2 2\n2 1 4\n");
    try {
      io::read_skew_matrix(in);
      FAIL("expected a format error");
    } catch (const FormatError& e) {
      CHECK(e.line() == 2);
    }
  }
  {
    std::istringstream in("%%MatrixMarket matrix coordinate real skew-symmetric\n3 3 1\n2 1 abc\n");
    try {
      io::read_skew_matrix(in);
      FAIL("expected a format error");
    } catch (const FormatError& e) {
      CHECK(e.line() == 3);
    }
  }
  {
    std::istringstream in("garbage\n");
    CHECK_THROWS_AS(io::read_skew_matrix(in), FormatError);
  }
  CHECK_THROWS_AS(io::read_skew_matrix(std::filesystem::path("/nonexistent/file.mtx")), IoError);
}

TEST_CASE("Matrix Market: complex round trip and value files") {
  ComplexPlanes c(3, 2);
  auto v = random_uniform(12, 17);
  for (Index j = 0; j < 2; ++j)
    for (Index i = 0; i < 3; ++i) {
      c.re(i, j) = v[static_cast<std::size_t>(i + 3 * j)];
      c.im(i, j) = v[static_cast<std::size_t>(6 + i + 3 * j)] * 1e-300;
    }
  std::stringstream ss;
  io::write_complex_matrix(ss, c);
  CHECK(io::read_complex_matrix(ss) == c);

  const auto dir = std::filesystem::temp_directory_path() / "skeweig_mmio_test";
  std::filesystem::create_directories(dir);
  std::vector<double> vals = {1.0 / 3.0, -0.0, 1e-310, 12345.678};
  io::write_values(dir / "v.txt", vals);
  auto back = io::read_values(dir / "v.txt");
  REQUIRE(back.size() == vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) CHECK(back[i] == vals[i]);
  std::filesystem::remove_all(dir);
}
