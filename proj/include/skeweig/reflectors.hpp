#pragma once

#include <span>
#include <vector>

#include "skeweig/types.hpp"

namespace skeweig {

/// H = I - tau v v^T with v[0] = 1 and H x = beta e_1.
struct Householder {
  std::vector<double> v;
  double tau = 0.0;
  double beta = 0.0;
};

/// Reflector mapping x onto beta e_1 with beta = -sign(x[0]) ||x||
/// (x[0] = 0 counts as positive). When x[1:] is zero the reflector is the
/// identity: tau = 0 and beta = x[0].
Householder householder(std::span<const double> x);

/// In-place variant: on return x[0] = beta and x[1:] holds v[1:].
/// Returns tau.
double make_reflector(std::span<double> x);

/// Euclidean norm with scaling against overflow.
double norm2(std::span<const double> x);

/// A run of k consecutive reflectors H_0 ... H_{k-1} acting on rows
/// [row0, row0 + m) of an n-vector space. Column c of `v` is the Householder
/// vector of H_c: zero above row c, one at row c. `t` is the upper triangular
/// compact-WY factor with H_0 H_1 ... H_{k-1} = I - V T V^T.
struct ReflectorBlock {
  Index row0 = 0;
  Matrix v;
  std::vector<double> tau;
  Matrix t;

  Index rows() const { return v.rows(); }
  Index count() const { return v.cols(); }
};

/// Forward, column-wise T factor of a block of reflectors, accumulated one
/// reflector at a time.
Matrix build_t_factor(ConstMatrixRef v, std::span<const double> tau);

/// Orthogonal Q = B_0 B_1 ... B_last as a product of reflector blocks, in
/// the order the blocks were applied (from the right) to the matrix being
/// reduced.
class ReflectorSet {
 public:
  ReflectorSet() = default;
  ReflectorSet(Index n, Index block_size) : n_(n), nb_(block_size) {}

  Index dimension() const { return n_; }
  Index block_size() const { return nb_; }
  std::span<const ReflectorBlock> blocks() const { return blocks_; }
  Index reflector_count() const;
  bool empty() const { return blocks_.empty(); }

  /// Appends a block; `t` is built from (v, tau) if left empty.
  void push(ReflectorBlock block);

  /// X <- Q X, or X <- Q^T X with `transpose`.
  void apply(MatrixRef x, bool transpose = false) const;

  /// Applies the same real transformation to both planes.
  void apply(ComplexPlanes& x, bool transpose = false) const;

  /// Q as a dense n x n matrix (Q applied to the identity).
  Matrix materialize() const;

 private:
  Index n_ = 0;
  Index nb_ = 1;
  std::vector<ReflectorBlock> blocks_;
};

}  // namespace skeweig
