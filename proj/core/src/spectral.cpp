#include "robust_merton/spectral.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace robust_merton {

Matrix cholesky_factor(const Matrix& shape) {
  if (shape.rows() != shape.cols() || shape.rows() == 0) {
    throw Error(ErrorKind::InvalidDimension, "Cholesky factor needs a non-empty square matrix");
  }
  Eigen::LLT<Matrix> llt(shape);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::NotPositiveDefinite, "non-positive pivot in Cholesky factorisation");
  }
  Matrix tau = llt.matrixL();
  if (!(tau.diagonal().array() > 0.0).all() || !tau.allFinite()) {
    throw Error(ErrorKind::NotPositiveDefinite, "non-positive pivot in Cholesky factorisation");
  }
  return tau;
}

SpectralData spectral_decompose(const ConstraintGeometry& geometry, const Matrix& tau) {
  const Eigen::Index d = geometry.A.rows();
  if (tau.rows() != d || tau.cols() != d) {
    throw Error(ErrorKind::InvalidDimension, "tau does not match the dimension of A");
  }

  Matrix M = tau.transpose() * geometry.A * tau;
  M = 0.5 * (M + M.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Matrix> solver(M);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::Convergence, "symmetric eigensolver did not converge");
  }
  Vector lambda = solver.eigenvalues();  // ascending
  Matrix V = solver.eigenvectors();

  const double threshold = kZeroEigenvalueTolerance * std::max(lambda(d - 1), 1.0);
  const auto n_zero = (lambda.array() < threshold).count();
  if (n_zero > 1) {
    throw Error(ErrorKind::DegenerateSpectrum,
                std::to_string(n_zero) + " eigenvalues of tau^T A tau are numerically zero");
  }
  if (n_zero == 0) {
    throw Error(ErrorKind::KernelMismatch, "tau^T A tau has no numerically zero eigenvalue");
  }
  lambda(0) = 0.0;

  SpectralData out;
  out.tau = tau;
  out.tau_inv_one = tau.triangularView<Eigen::Lower>().solve(Vector::Ones(d));
  out.tau_inv_one_norm = out.tau_inv_one.norm();
  V.col(0) = out.tau_inv_one / out.tau_inv_one_norm;

  // Modified Gram-Schmidt, twice, keeps v_2..v_d orthonormal to the pinned v_1.
  for (int pass = 0; pass < 2; ++pass) {
    for (Eigen::Index i = 1; i < d; ++i) {
      for (Eigen::Index j = 0; j < i; ++j) {
        V.col(i) -= V.col(j).dot(V.col(i)) * V.col(j);
      }
      V.col(i).normalize();
    }
  }

  out.eigenvalues = std::move(lambda);
  out.eigenvectors = std::move(V);
  return out;
}

}  // namespace robust_merton
