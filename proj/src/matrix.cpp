#include "skeweig/matrix.hpp"

#include <cmath>
#include <random>
#include <string>

#include "skeweig/errors.hpp"
#include "skeweig/kernels.hpp"

namespace skeweig {

namespace {

double to_unit_interval(std::uint64_t bits) {
  // top 53 bits -> [0, 1), then -> [-1, 1)
  const double u = static_cast<double>(bits >> 11) * 0x1.0p-53;
  return 2.0 * u - 1.0;
}

}  // namespace

DenseSkewMatrix::DenseSkewMatrix(Index n) : n_(n), storage_(n, n) {
  if (n < 0) throw ArgumentError("matrix dimension must be nonnegative");
}

DenseSkewMatrix DenseSkewMatrix::from_dense(const Matrix& full, bool validate) {
  if (full.rows() != full.cols()) throw ArgumentError("skew matrix must be square");
  const Index n = full.rows();
  DenseSkewMatrix a(n);
  for (Index j = 0; j < n; ++j) {
    if (validate && full(j, j) != 0.0)
      throw ValidationError("diagonal entry (" + std::to_string(j + 1) + "," + std::to_string(j + 1) +
                            ") of a skew-symmetric matrix must be zero");
    for (Index i = j + 1; i < n; ++i) {
      if (validate && full(i, j) + full(j, i) != 0.0)
        throw ValidationError("entries (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") and (" +
                              std::to_string(j + 1) + "," + std::to_string(i + 1) + ") are not skew-symmetric");
      a.lower(i, j) = full(i, j);
    }
  }
  return a;
}

Matrix DenseSkewMatrix::materialize() const {
  Matrix m(n_, n_);
  for (Index j = 0; j < n_; ++j) {
    for (Index i = j + 1; i < n_; ++i) {
      m(i, j) = storage_(i, j);
      m(j, i) = -storage_(i, j);
    }
  }
  return m;
}

double DenseSkewMatrix::frobenius_norm() const {
  double s = 0.0;
  for (Index j = 0; j < n_; ++j)
    for (Index i = j + 1; i < n_; ++i) s += storage_(i, j) * storage_(i, j);
  return std::sqrt(2.0 * s);
}

bool operator==(const DenseSkewMatrix& a, const DenseSkewMatrix& b) {
  if (a.n_ != b.n_) return false;
  for (Index j = 0; j < a.n_; ++j)
    for (Index i = j + 1; i < a.n_; ++i)
      if (a.storage_(i, j) != b.storage_(i, j)) return false;
  return true;
}

BandSkewMatrix::BandSkewMatrix(Index n, Index bandwidth) : n_(n), b_(bandwidth), band_(bandwidth + 1, n) {
  if (n < 0 || bandwidth < 0) throw ArgumentError("band matrix dimensions must be nonnegative");
}

double BandSkewMatrix::operator()(Index i, Index j) const {
  if (i > j) return i - j <= b_ ? band_(i - j, j) : 0.0;
  if (i < j) return j - i <= b_ ? -band_(j - i, i) : 0.0;
  return 0.0;
}

Matrix BandSkewMatrix::materialize() const {
  Matrix m(n_, n_);
  for (Index j = 0; j < n_; ++j) {
    for (Index i = j + 1; i <= std::min(n_ - 1, j + b_); ++i) {
      m(i, j) = band_(i - j, j);
      m(j, i) = -band_(i - j, j);
    }
  }
  return m;
}

double BandSkewMatrix::frobenius_norm() const {
  double s = 0.0;
  for (Index j = 0; j < n_; ++j)
    for (Index d = 1; d <= b_ && j + d < n_; ++d) s += band_(d, j) * band_(d, j);
  return std::sqrt(2.0 * s);
}

Matrix SkewTridiagonal::materialize() const {
  Matrix m(n, n);
  for (Index k = 0; k + 1 < n; ++k) {
    m(k, k + 1) = alpha[static_cast<std::size_t>(k)];
    m(k + 1, k) = -alpha[static_cast<std::size_t>(k)];
  }
  return m;
}

DenseSkewMatrix random_skew(Index n, std::uint64_t seed) {
  if (n < 1) throw ArgumentError("random_skew: dimension must be at least 1");
  std::mt19937_64 gen(seed);
  DenseSkewMatrix a(n);
  for (Index j = 0; j < n; ++j)
    for (Index i = j + 1; i < n; ++i) a.lower(i, j) = to_unit_interval(gen());
  return a;
}

std::vector<double> random_uniform(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<double> out(count);
  for (auto& v : out) v = to_unit_interval(gen());
  return out;
}

std::vector<double> skew_matvec(const DenseSkewMatrix& a, std::span<const double> x) {
  if (static_cast<Index>(x.size()) != a.size())
    throw ArgumentError("skew_matvec: vector length " + std::to_string(x.size()) + " does not match dimension " +
                        std::to_string(a.size()));
  std::vector<double> y(x.size());
  kernels::skew_matvec(a.storage(), x, y);
  return y;
}

void skew_rank2_update(DenseSkewMatrix& a, std::span<const double> u, std::span<const double> v) {
  if (static_cast<Index>(u.size()) != a.size() || static_cast<Index>(v.size()) != a.size())
    throw ArgumentError("skew_rank2_update: vector lengths do not match dimension " + std::to_string(a.size()));
  kernels::skew_rank2_update(a.storage(), u, v);
}

}  // namespace skeweig
