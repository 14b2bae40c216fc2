#pragma once

// Robust constrained utility maximisation
//
//   sup_{pi : <pi,1> = h} inf_{mu in K} E_mu[U_gamma(X_T^pi)]
//
// over an ellipsoidal drift set K. The dual (inf-sup) problem reduces to
// minimising the quadratic
//
//   g(rho) = rho^T tau^T A tau rho / (2(1-gamma)) + (h c + A nu / (1-gamma))^T tau rho
//
// over the ball |rho| <= kappa, where Gamma = tau tau^T and mu = nu + tau rho.
// In the eigenbasis (lambda_i, v_i) of tau^T A tau the minimiser is
//
//   rho* = - sum_i (lambda_i/(1-gamma) + h/(psi |tau^{-1} 1|))^{-1} b_i v_i,
//   b_i  = < h tau^T c + lambda_i/(1-gamma) tau^{-1} nu, v_i >,
//
// with the scalar psi in (0, kappa] fixed by |rho*| = kappa. The pair
// (pi*, mu*) with pi* = A mu* / (1-gamma) + h c is a saddle point, so the
// same strategy also solves the sup-inf problem.

#include <cstdint>
#include <optional>
#include <string>

#include "robust_merton/market.hpp"
#include "robust_merton/spectral.hpp"

namespace robust_merton {

/// Everything about an instance that does not depend on the solve itself.
struct RobustProblem {
  MarketModel market;
  InvestorProfile profile;
  UncertaintySet uncertainty;
  ConstraintGeometry geometry;
  SpectralData spectral;

  /// Same market and ellipsoid shape, new radius; geometry and spectrum are reused.
  RobustProblem with_kappa(double kappa) const;
  /// Same market and ellipsoid, new risk aversion.
  RobustProblem with_gamma(double gamma) const;
};

RobustProblem prepare_problem(const MarketModel& market, const InvestorProfile& profile,
                              const UncertaintySet& uncertainty);

struct RobustSolution {
  std::optional<double> psi;       // absent for kappa == 0
  std::optional<Vector> rho_star;  // tau^{-1}(mu* - nu); absent for kappa == 0
  std::optional<Vector> rho_perp;  // rho* without its v_1 component
  Vector mu_star;
  Vector pi_star;
  double value = 0.0;  // E_{mu*}[U(X^{pi*})]
  double ce = 0.0;     // certainty equivalent of value
  LogSpaceUtility utility;
  double kappa = 0.0;
  double gamma = 0.0;
  double h = 0.0;
};

/// pi = A mu / (1 - gamma) + h c, optimal for a known drift mu.
Vector merton_constrained(const ConstraintGeometry& geometry, const InvestorProfile& profile,
                          const Vector& mu);

/// sup_pi E_mu[U(X^pi)] through the reduced (d-1)-asset market
/// (r~, mu~, sigma~ = D sigma). Independent of merton_constrained.
LogSpaceUtility optimal_value_given_mu_log(const MarketModel& market, const InvestorProfile& profile,
                                           const Vector& mu);
double optimal_value_given_mu(const MarketModel& market, const InvestorProfile& profile,
                              const Vector& mu);

double evaluate_g(const Vector& rho, const SpectralData& spectral, const ConstraintGeometry& geometry,
                  const InvestorProfile& profile, const Vector& nu);

/// The monotone scalar equation F(psi) = kappa^2 whose root places rho* on
/// the sphere of radius kappa.
class PsiEquation {
 public:
  PsiEquation(const SpectralData& spectral, const ConstraintGeometry& geometry,
              const InvestorProfile& profile, const Vector& nu);

  /// F(psi) = psi^2 + sum_{i>=2} a_i(psi)^2.
  double operator()(double psi) const;
  /// Coefficient of v_i in rho* for the given psi. Index 0 uses the full
  /// formula, which evaluates to -psi up to rounding.
  double coefficient(int i, double psi) const;
  /// b_i as defined above.
  const Vector& projections() const { return projections_; }

 private:
  Vector lambda_;
  Vector projections_;
  double inv_one_norm_;
  double h_;
  double risk_tolerance_;  // 1 / (1 - gamma)
};

inline constexpr double kPsiLowerFraction = 1e-14;
inline constexpr double kPsiTolerance = 1e-13;
inline constexpr int kPsiMaxIterations = 200;

/// Unique psi in (0, kappa] with F(psi) = kappa^2, by bisection.
/// Throws Error(InvalidRadius) for kappa <= 0 and Error(Convergence) if the
/// bracket does not close.
double solve_psi(const SpectralData& spectral, const ConstraintGeometry& geometry,
                 const InvestorProfile& profile, const Vector& nu, double kappa);

struct WorstCase {
  Vector mu_star;
  Vector rho_star;
  Vector rho_perp;  // rho* + psi v_1, summed directly so it keeps full precision at large kappa
  double psi = 0.0;
};

WorstCase worst_case_drift(const SpectralData& spectral, const ConstraintGeometry& geometry,
                           const InvestorProfile& profile, const UncertaintySet& uncertainty);

/// Robust strategy from the worst-case drift. Cross-checks against the
/// representation -h/(psi |tau^{-1} 1|) Gamma^{-1}(mu* - nu) and against
/// <pi*, 1> = h; throws Error(InternalConsistency) on disagreement.
Vector robust_strategy(const WorstCase& worst, const SpectralData& spectral,
                       const ConstraintGeometry& geometry, const InvestorProfile& profile,
                       const UncertaintySet& uncertainty);

/// Strategy from the second representation alone.
Vector robust_strategy_dual(const WorstCase& worst, const SpectralData& spectral,
                            const InvestorProfile& profile, const UncertaintySet& uncertainty);

/// argmin_{mu in K} theta^T mu = nu - kappa Gamma theta / sqrt(theta^T Gamma theta).
/// Throws Error(DegenerateDirection) for theta == 0.
Vector worst_case_drift_for_strategy(const Vector& theta, const UncertaintySet& uncertainty);

RobustSolution solve_robust(const RobustProblem& problem);
RobustSolution solve_robust(const MarketModel& market, const InvestorProfile& profile,
                            const UncertaintySet& uncertainty);

struct SaddleReport {
  /// max_pi E_{mu*}[U(pi)] - E_{mu*}[U(pi*)]; <= tolerance when pi* is a best response.
  double investor_gain = 0.0;
  /// max_mu E_{mu*}[U(pi*)] - E_mu[U(pi*)]; <= tolerance when mu* is a worst case.
  double market_gain = 0.0;
  /// |optimal_value_given_mu(mu*) - value|.
  double minimax_gap = 0.0;
  double tolerance = 0.0;
  double minimax_tolerance = 0.0;
  int n_samples = 0;
  std::uint64_t seed = 0;
  std::string violation;  // empty when passed
  Vector offending_pi;
  Vector offending_mu;

  bool passed() const { return violation.empty(); }
};

inline constexpr double kSaddleTolerance = 1e-8;
inline constexpr double kMinimaxTolerance = 1e-10;

/// Samples n_samples drifts in K (half on the boundary) and n_samples
/// strategies with <pi, 1> = h, and checks both saddle inequalities plus the
/// minimax equality. Tolerances scale with 1 + |value|.
SaddleReport verify_saddle_point(const RobustProblem& problem, const RobustSolution& solution,
                                 int n_samples, std::uint64_t seed);
SaddleReport verify_saddle_point(const MarketModel& market, const InvestorProfile& profile,
                                 const UncertaintySet& uncertainty, const RobustSolution& solution,
                                 int n_samples, std::uint64_t seed);

}  // namespace robust_merton
