#pragma once

#include "skeweig/matrix.hpp"
#include "skeweig/reflectors.hpp"

namespace skeweig {

/// Q^T A Q = trd with Q = reflectors (one Householder reflector per column,
/// grouped into compact-WY blocks for the back transformation).
struct OneStepFactorization {
  SkewTridiagonal trd;
  ReflectorSet reflectors;
};

struct BandReduction {
  BandSkewMatrix band;
  ReflectorSet reflectors;
};

struct TridiagReduction {
  SkewTridiagonal trd;
  ReflectorSet reflectors;
};

/// Q_tri^T Q_band^T A Q_band Q_tri = trd.
struct TwoStepFactorization {
  SkewTridiagonal trd;
  ReflectorSet band_reflectors;
  ReflectorSet tri_reflectors;
  Index nb = 0;
  double seconds_full_to_band = 0.0;
  double seconds_band_to_tridiag = 0.0;
};

/// Unblocked Householder tridiagonalization. For column i the trailing skew
/// block is updated by the rank-2 correction A + v u^T - u v^T with
/// u = tau A v (plus the analytically vanishing 0.5 tau^2 (v^T A v) v term).
/// `block_size` only controls how reflectors are grouped for the back
/// transformation.
OneStepFactorization tridiagonalize_onestep(DenseSkewMatrix a, Index block_size = 64);

/// Blocked reduction to bandwidth nb, 1 <= nb < n. Each panel is QR-factored,
/// its compact-WY factor built, and the trailing block updated with
/// A + V U^T - U V^T, U = A V T - 0.5 V (T^T V^T A V T).
BandReduction reduce_full_to_band(DenseSkewMatrix a, Index nb);

/// Serial bulge chasing: column j is reduced by one reflector, and the fill it
/// causes is chased down the band one block at a time.
TridiagReduction reduce_band_to_tridiag(const BandSkewMatrix& band);

/// Full-to-band followed by band-to-tridiagonal. nb is clamped to n - 1.
TwoStepFactorization tridiagonalize_twostep(DenseSkewMatrix a, Index nb);

/// X <- Q X (or Q^T X); the real transformation is applied to both planes.
ComplexPlanes apply_reflectors(const ReflectorSet& reflectors, ComplexPlanes x, bool transpose = false);

}  // namespace skeweig
