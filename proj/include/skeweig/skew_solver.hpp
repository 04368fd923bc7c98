#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "skeweig/matrix.hpp"
#include "skeweig/types.hpp"

namespace skeweig {

enum class Flavor { OneStep, TwoStep };

std::string to_string(Flavor f);
/// "one-step" / "two-step"; throws ArgumentError otherwise.
Flavor parse_flavor(const std::string& s);

struct SolverOptions {
  Flavor flavor = Flavor::TwoStep;
  Index nb = 64;          // block size; band width of the two-step flavor
  double fraction = 0.5;  // portion of the spectrum, 0 < fraction <= 1
  int workers = 0;        // OpenMP threads, 0 = runtime default
};

/// Wall-clock seconds per stage. The two-step split fields stay zero for the
/// one-step flavor.
struct StageTimes {
  double full_to_band = 0.0;
  double band_to_tridiag = 0.0;
  double tridiagonalize = 0.0;
  double tridiag_solve = 0.0;
  double back_transform = 0.0;
  double total = 0.0;
};

/// A q_k = i lambda_k q_k for every column k of `vectors`; lambda descending.
/// With `half` set only the nonnegative half of the spectrum is present.
struct EigenDecomposition {
  std::vector<double> lambda;
  ComplexPlanes vectors;
  bool half = false;
};

/// Row k of X scaled by i^k.
ComplexPlanes apply_D(ConstMatrixRef x);

/// || -i D^H T D - T_sym ||_F for the skew tridiagonal T built from alpha and
/// the symmetric tridiagonal T_sym with zero diagonal and off-diagonal alpha.
double symmetrization_check(std::span<const double> alpha);

/// Number of eigenpairs returned for a given fraction: ceil(fraction * n).
Index eigenpair_count(Index n, double fraction);

/// Eigenpairs of a real skew-symmetric matrix, the largest ceil(fraction n)
/// values of lambda in descending order. |lambda| below 100 n eps ||A||_2 is
/// set to exactly zero. Each eigenvector is scaled so that its entry of
/// largest modulus is real and positive.
EigenDecomposition solve_skew_eigen(const DenseSkewMatrix& a, const SolverOptions& opts = {},
                                    StageTimes* times = nullptr);

/// Appends the pairs (-lambda_k, conj(q_k)) for every lambda_k > 0. The
/// result is no longer a half decomposition.
EigenDecomposition expand_half_spectrum(const EigenDecomposition& e);

struct ResidualMetrics {
  double norm_a = 0.0;             // ||A||_F
  double max_residual = 0.0;       // max_k ||A q_k - i lambda_k q_k||_2
  double relative_residual = 0.0;  // max_residual / ||A||_F (0 for A = 0)
  double unitarity = 0.0;          // ||Q^H Q - I||_F over the returned columns
  std::optional<double> pairing;     // max_k |lambda_k + lambda_pair(k)|, full spectrum only
  std::optional<double> oracle_gap;  // max_k |lambda_k - lambda_k(bisection)|
};

/// `with_oracle` recomputes the eigenvalues by Householder tridiagonalization
/// and Sturm bisection and reports the largest deviation.
ResidualMetrics residual_report(const DenseSkewMatrix& a, const EigenDecomposition& e, bool with_oracle = false);

/// Scales every column so that its entry of largest modulus (the first one on
/// ties) is real and positive.
void normalize_phase(ComplexPlanes& x);

/// Sets the OpenMP thread count for its lifetime; 0 leaves it alone.
class WorkerScope {
 public:
  explicit WorkerScope(int workers);
  ~WorkerScope();
  WorkerScope(const WorkerScope&) = delete;
  WorkerScope& operator=(const WorkerScope&) = delete;

 private:
  int previous_ = 0;
  bool active_ = false;
};

}  // namespace skeweig
