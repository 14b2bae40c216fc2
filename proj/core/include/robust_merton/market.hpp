#pragma once

// Market model, investor profile, ellipsoidal drift uncertainty and the
// constraint-reduction geometry shared by every solver in the library.
//
// The investor is restricted to constant strategies with <pi, 1> = h. The
// constraint is eliminated through the difference matrix D (rows e_i - e_d),
// which produces
//
//   A = D^T (D sigma sigma^T D^T)^{-1} D,    c = (I - A sigma sigma^T) e_d,
//
// and the constrained Merton strategy pi = A mu / (1 - gamma) + h c.

#include <Eigen/Core>

#include "robust_merton/errors.hpp"

namespace robust_merton {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Largest admissible gamma; formulas divide by 1 - gamma.
inline constexpr double kGammaCeiling = 1.0 - 1e-8;
/// sigma is full rank iff s_min > kRankTolerance * s_max.
inline constexpr double kRankTolerance = 1e-10;
/// Default relative tolerance for the A/c identities.
inline constexpr double kIdentityTolerance = 1e-10;

/// Black-Scholes market with d risky assets driven by an m-dimensional
/// Brownian motion. Validated on construction and immutable afterwards.
class MarketModel {
 public:
  /// Throws Error(InvalidMarket) when d < 2, m < d, T <= 0, x0 <= 0,
  /// any entry is non-finite, or sigma is not of full row rank.
  MarketModel(Matrix sigma, double r, double horizon, double x0);

  int d() const { return static_cast<int>(sigma_.rows()); }
  int m() const { return static_cast<int>(sigma_.cols()); }
  double r() const { return r_; }
  double horizon() const { return horizon_; }
  double x0() const { return x0_; }
  const Matrix& sigma() const { return sigma_; }
  /// sigma sigma^T, cached.
  const Matrix& covariance() const { return covariance_; }

 private:
  Matrix sigma_;
  Matrix covariance_;
  double r_;
  double horizon_;
  double x0_;
};

class InvestorProfile {
 public:
  /// Throws Error(InvalidProfile) unless gamma <= kGammaCeiling and h > 0.
  InvestorProfile(double gamma, double h);

  double gamma() const { return gamma_; }
  double h() const { return h_; }

 private:
  double gamma_;
  double h_;
};

/// K = { mu : (mu - nu)^T Gamma^{-1} (mu - nu) <= kappa^2 }.
class UncertaintySet {
 public:
  /// Throws Error(InvalidUncertainty) if Gamma is not symmetric positive
  /// definite or dimensions disagree, Error(InvalidRadius) if kappa < 0.
  UncertaintySet(Vector nu, Matrix shape, double kappa);

  int d() const { return static_cast<int>(nu_.size()); }
  const Vector& nu() const { return nu_; }
  const Matrix& shape() const { return shape_; }
  double kappa() const { return kappa_; }

  /// Same ellipsoid centre and shape with a different radius.
  UncertaintySet with_kappa(double kappa) const;

  /// (mu - nu)^T Gamma^{-1} (mu - nu).
  double mahalanobis_sq(const Vector& mu) const;

 private:
  Vector nu_;
  Matrix shape_;
  double kappa_;
};

struct ConstraintGeometry {
  Matrix D;
  Matrix A;
  Vector c;
};

/// (d-1) x d matrix with rows e_i - e_d. Throws Error(InvalidDimension) for d < 2.
Matrix build_difference_matrix(int d);

/// Throws Error(SingularGeometry) when D sigma sigma^T D^T cannot be
/// factorised as a positive definite matrix.
ConstraintGeometry build_constraint_geometry(const MarketModel& market);

struct IdentityReport {
  double kernel = 0.0;          // max |A 1|
  double idempotence = 0.0;     // max |A S A - A|, S = sigma sigma^T
  double c_orthogonality = 0.0; // max |c^T S A|
  double c_sum = 0.0;           // |c^T 1 - 1|
  double tolerance = 0.0;

  double max_deviation() const;
  bool passed() const { return max_deviation() <= tolerance; }
};

/// Absolute deviations of the four identities; passes iff all are <= tol.
IdentityReport check_identities(const ConstraintGeometry& geometry, const MarketModel& market,
                                double tol);

/// Expected utility of terminal wealth for the constant strategy pi under
/// drift mu, carried in log space so extreme drifts neither overflow nor
/// underflow before a certainty equivalent is taken.
///
/// gamma != 0: value = sign(gamma) * exp(exponent)
/// gamma == 0: value = exponent
struct LogSpaceUtility {
  double gamma = 0.0;
  double exponent = 0.0;

  double value() const;
  double certainty_equivalent() const;
};

/// Log-space form of the closed-form constant-strategy utility.
LogSpaceUtility expected_utility_log(const MarketModel& market, const Vector& pi, const Vector& mu,
                                     double gamma);

/// E_mu[U_gamma(X_T^pi)] for the constant strategy pi. Throws
/// Error(InvalidProfile) for gamma >= 1 (above kGammaCeiling).
double expected_utility_constant(const MarketModel& market, const Vector& pi, const Vector& mu,
                                 double gamma);

/// U_gamma^{-1}(value). Throws Error(OutOfRange) if value is outside the range of U_gamma.
double certainty_equivalent(double value, double gamma);

/// True iff r 1 lies in K, in which case the pure bond strategy is optimal
/// among unconstrained admissible strategies.
bool bond_only_optimal(const UncertaintySet& uncertainty, double r);

void require_gamma(double gamma);

}  // namespace robust_merton
