#pragma once

#include "robust_merton/market.hpp"

namespace robust_merton {

/// Eigenvalue lambda is treated as zero iff lambda < kZeroEigenvalueTolerance * max(lambda_max, 1).
inline constexpr double kZeroEigenvalueTolerance = 1e-10;

/// Cholesky factor tau of Gamma and the eigendecomposition of tau^T A tau.
///
/// tau^T A tau is PSD with a one-dimensional kernel spanned by tau^{-1} 1, so
/// the first eigenpair is pinned analytically: lambda_1 = 0 and
/// v_1 = tau^{-1} 1 / |tau^{-1} 1| with that sign. The remaining eigenvectors
/// come from the dense solver and are re-orthogonalised against v_1.
struct SpectralData {
  Matrix tau;               // lower triangular, positive diagonal
  Vector tau_inv_one;       // tau^{-1} 1
  double tau_inv_one_norm;  // |tau^{-1} 1|
  Vector eigenvalues;       // ascending, eigenvalues(0) == 0
  Matrix eigenvectors;      // column i is v_{i+1}

  int d() const { return static_cast<int>(eigenvalues.size()); }
};

/// Lower-triangular tau with tau tau^T = Gamma. Throws Error(NotPositiveDefinite).
Matrix cholesky_factor(const Matrix& shape);

/// Throws Error(DegenerateSpectrum) if more than one eigenvalue is below the
/// zero threshold and Error(KernelMismatch) if none is.
SpectralData spectral_decompose(const ConstraintGeometry& geometry, const Matrix& tau);

}  // namespace robust_merton
