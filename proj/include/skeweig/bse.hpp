#pragma once

#include <cstdint>
#include <vector>

#include "skeweig/matrix.hpp"
#include "skeweig/skew_solver.hpp"
#include "skeweig/types.hpp"

namespace skeweig {

/// H_BS = [[A, B], [-conj(B), -conj(A)]] with A Hermitian and B complex
/// symmetric, both n x n.
struct BSEHamiltonian {
  ComplexPlanes a;
  ComplexPlanes b;

  Index size() const { return a.rows(); }
};

/// H_BS x_k = lambda_k x_k, lambda descending and positive; x_k has unit norm.
struct BSEDecomposition {
  std::vector<double> lambda;
  ComplexPlanes vectors;  // 2n x k
};

/// Throws ArgumentError on shape problems and ValidationError when A is not
/// Hermitian or B not symmetric to 8 eps (relative, Frobenius).
void validate(const BSEHamiltonian& h);

/// M = [[Re(A+B), Im(A-B)], [-Im(A+B), Re(A-B)]], symmetrized by averaging.
Matrix build_m(const BSEHamiltonian& h);

/// Lower Cholesky factor. A pivot at or below n eps max_i M(i,i) raises
/// NotDefiniteError with the 1-based pivot index. Only the lower triangle of
/// `m` is read.
Matrix cholesky(const Matrix& m);

/// W = L^T J L with J = [[0, I], [-I, 0]]; L must be 2n x 2n.
DenseSkewMatrix form_w(const Matrix& l);

/// Positive half of the spectrum of H_BS. `opts.fraction` is ignored.
BSEDecomposition solve_bse(const BSEHamiltonian& h, SolverOptions opts = {}, StageTimes* times = nullptr);

/// Random definite problem: Omega = C^H C + margin I with
/// C = [[C1, C2], [conj(C2), conj(C1)]] and C1, C2 uniform on [-1, 1) in
/// both planes; A and B are the top blocks of Omega.
BSEHamiltonian random_definite_bse(Index n, std::uint64_t seed, double margin);

/// Dense H_BS (2n x 2n).
ComplexPlanes materialize_hbs(const BSEHamiltonian& h);

/// ||H_BS||_F.
double hbs_frobenius_norm(const BSEHamiltonian& h);

/// max_k ||H_BS x_k - lambda_k x_k||_2.
double bse_max_residual(const BSEHamiltonian& h, const BSEDecomposition& d);

}  // namespace skeweig
