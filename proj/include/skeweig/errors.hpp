#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace skeweig {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad dimensions, ranges or options passed by the caller.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed Matrix Market content. `line()` is 1-based, 0 when unknown.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Well-formed input that violates a structural requirement (skew symmetry,
/// Hermitian blocks, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Cholesky breakdown: the matrix is not (numerically) positive definite.
/// `pivot()` is the 1-based index of the failing pivot.
class NotDefiniteError : public Error {
 public:
  NotDefiniteError(std::ptrdiff_t pivot, double value)
      : Error("matrix is not positive definite: pivot " + std::to_string(pivot) +
              " has value " + std::to_string(value)),
        pivot_(pivot) {}

  std::ptrdiff_t pivot() const noexcept { return pivot_; }

 private:
  std::ptrdiff_t pivot_;
};

/// An iterative method failed to converge.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace skeweig
