#pragma once

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <span>
#include <type_traits>
#include <vector>

namespace skeweig {

using Index = std::ptrdiff_t;

//
// Non-owning column-major view. Element (i, j) lives at data[i + j * ld].
//
template <typename T>
class MatrixView {
 public:
  MatrixView() = default;
  MatrixView(T* data, Index rows, Index cols, Index ld) : data_(data), rows_(rows), cols_(cols), ld_(ld) {}

  // a mutable view converts to a read-only one
  template <typename U>
    requires(std::is_same_v<const U, T> && !std::is_same_v<U, T>)
  MatrixView(const MatrixView<U>& other)
      : data_(other.data()), rows_(other.rows()), cols_(other.cols()), ld_(other.ld()) {}

  T& operator()(Index i, Index j) const {
    assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
    return data_[i + j * ld_];
  }

  T* data() const { return data_; }
  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  Index ld() const { return ld_; }

  T* col_ptr(Index j) const { return data_ + j * ld_; }
  std::span<T> col(Index j) const { return {data_ + j * ld_, static_cast<std::size_t>(rows_)}; }

  MatrixView block(Index r0, Index c0, Index nr, Index nc) const {
    assert(r0 >= 0 && c0 >= 0 && r0 + nr <= rows_ && c0 + nc <= cols_);
    return {data_ + r0 + c0 * ld_, nr, nc, ld_};
  }

 private:
  T* data_ = nullptr;
  Index rows_ = 0;
  Index cols_ = 0;
  Index ld_ = 1;
};

using MatrixRef = MatrixView<double>;
using ConstMatrixRef = MatrixView<const double>;

/// Owning dense column-major real matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(Index rows, Index cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols), 0.0) {}

  static Matrix identity(Index n) {
    Matrix m(n, n);
    for (Index i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  double& operator()(Index i, Index j) {
    assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
    return data_[static_cast<std::size_t>(i + j * rows_)];
  }
  double operator()(Index i, Index j) const {
    assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
    return data_[static_cast<std::size_t>(i + j * rows_)];
  }

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  std::span<double> col(Index j) { return {data() + j * rows_, static_cast<std::size_t>(rows_)}; }
  std::span<const double> col(Index j) const { return {data() + j * rows_, static_cast<std::size_t>(rows_)}; }

  MatrixRef view() { return {data(), rows_, cols_, std::max<Index>(rows_, 1)}; }
  ConstMatrixRef view() const { return {data(), rows_, cols_, std::max<Index>(rows_, 1)}; }
  MatrixRef block(Index r0, Index c0, Index nr, Index nc) { return view().block(r0, c0, nr, nc); }
  ConstMatrixRef block(Index r0, Index c0, Index nr, Index nc) const { return view().block(r0, c0, nr, nc); }

  void fill(double v) { std::fill(data_.begin(), data_.end(), v); }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<double> data_;
};

/// Complex matrix kept as two real planes so that real kernels can be
/// applied to each half independently.
struct ComplexPlanes {
  Matrix re;
  Matrix im;

  ComplexPlanes() = default;
  ComplexPlanes(Index rows, Index cols) : re(rows, cols), im(rows, cols) {}
  ComplexPlanes(Matrix real, Matrix imag) : re(std::move(real)), im(std::move(imag)) {
    assert(re.rows() == im.rows() && re.cols() == im.cols());
  }

  Index rows() const { return re.rows(); }
  Index cols() const { return re.cols(); }

  friend bool operator==(const ComplexPlanes&, const ComplexPlanes&) = default;
};

}  // namespace skeweig
