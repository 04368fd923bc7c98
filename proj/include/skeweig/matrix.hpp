#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "skeweig/types.hpp"

namespace skeweig {

/// Dense real skew-symmetric matrix. Only the strictly lower triangle of the
/// column-major n x n storage is authoritative; the diagonal is identically
/// zero and the upper triangle is the negated transpose.
class DenseSkewMatrix {
 public:
  DenseSkewMatrix() = default;
  explicit DenseSkewMatrix(Index n);

  /// Copies the strictly lower triangle of `full`. With `validate` set, the
  /// diagonal must be exactly zero and a(i,j) + a(j,i) exactly zero.
  static DenseSkewMatrix from_dense(const Matrix& full, bool validate = true);

  Index size() const { return n_; }

  /// Stored entry, i > j.
  double lower(Index i, Index j) const { return storage_(i, j); }
  double& lower(Index i, Index j) { return storage_(i, j); }

  /// Materialized entry for any (i, j).
  double operator()(Index i, Index j) const {
    if (i > j) return storage_(i, j);
    if (i < j) return -storage_(j, i);
    return 0.0;
  }

  Matrix materialize() const;
  double frobenius_norm() const;

  /// Raw storage view (n x n); kernels use its strictly lower part only.
  MatrixRef storage() { return storage_.view(); }
  ConstMatrixRef storage() const { return storage_.view(); }

  friend bool operator==(const DenseSkewMatrix& a, const DenseSkewMatrix& b);

 private:
  Index n_ = 0;
  Matrix storage_;
};

/// Skew-symmetric band matrix with `bandwidth()` subdiagonals, LAPACK-style
/// lower band storage: entry (i, j), 0 < i - j <= b, sits at row i - j of
/// column j.
class BandSkewMatrix {
 public:
  BandSkewMatrix() = default;
  BandSkewMatrix(Index n, Index bandwidth);

  Index size() const { return n_; }
  Index bandwidth() const { return b_; }

  double lower(Index i, Index j) const { return band_(i - j, j); }
  double& lower(Index i, Index j) { return band_(i - j, j); }

  double operator()(Index i, Index j) const;
  Matrix materialize() const;
  double frobenius_norm() const;

 private:
  Index n_ = 0;
  Index b_ = 0;
  Matrix band_;
};

/// Skew tridiagonal matrix: entry (k, k+1) is alpha[k], entry (k+1, k) is
/// -alpha[k].
struct SkewTridiagonal {
  Index n = 0;
  std::vector<double> alpha;

  Matrix materialize() const;
};

/// Random skew matrix with strictly lower entries uniform on [-1, 1).
///
/// The generator is std::mt19937_64 seeded with `seed`; each 64-bit draw is
/// mapped to [0, 1) through its top 53 bits and then to [-1, 1). Entries are
/// drawn column by column, top to bottom, so the result is identical on every
/// platform.
DenseSkewMatrix random_skew(Index n, std::uint64_t seed);

/// Uniform [-1, 1) doubles from the same generator as random_skew().
std::vector<double> random_uniform(std::size_t count, std::uint64_t seed);

/// y = A x, touching only the stored lower triangle.
std::vector<double> skew_matvec(const DenseSkewMatrix& a, std::span<const double> x);

/// A <- A - v u^T + u v^T.
void skew_rank2_update(DenseSkewMatrix& a, std::span<const double> u, std::span<const double> v);

}  // namespace skeweig
