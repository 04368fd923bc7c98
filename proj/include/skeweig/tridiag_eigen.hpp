#pragma once

#include <vector>

#include "skeweig/types.hpp"

namespace skeweig {

/// Symmetric tridiagonal matrix: diagonal d (n), off-diagonal e (n - 1).
struct SymTridiagonal {
  std::vector<double> d;
  std::vector<double> e;

  Index size() const { return static_cast<Index>(d.size()); }
  Matrix materialize() const;
};

/// Which eigenvectors dc_eigen() returns.
struct EigenSelection {
  enum class Kind { All, None, Range };
  Kind kind = Kind::All;
  Index lo = 0;  // 1-based, inclusive (Range only)
  Index hi = 0;

  static EigenSelection all() { return {}; }
  static EigenSelection none() { return {Kind::None, 0, 0}; }
  static EigenSelection range(Index lo, Index hi) { return {Kind::Range, lo, hi}; }
};

/// All eigenvalues ascending; `vectors` holds the selected eigenvectors, whose
/// eigenvalues are lambda[first], lambda[first + 1], ...
struct TridiagEigen {
  std::vector<double> lambda;
  Matrix vectors;
  Index first = 0;
};

/// Cuppen's divide and conquer: split at the midpoint, solve both halves,
/// merge through the rank-one secular equation. Subproblems of size <= 16
/// use implicit QL.
TridiagEigen dc_eigen(const SymTridiagonal& t, EigenSelection want = EigenSelection::all());

/// Eigenvalues k_lo..k_hi (1-based, ascending) by Sturm-count bisection.
std::vector<double> bisection_eigenvalues(const SymTridiagonal& t, Index k_lo, Index k_hi);

/// Implicit QL with Wilkinson-type shifts (EISPACK tql2). Returns eigenvalues
/// ascending in d and the eigenvectors in q (n x n).
void ql_implicit(std::vector<double>& d, std::vector<double> e, Matrix& q);

}  // namespace skeweig
