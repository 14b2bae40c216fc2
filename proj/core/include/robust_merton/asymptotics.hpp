#pragma once

#include <optional>
#include <span>
#include <vector>

#include "robust_merton/solver.hpp"

namespace robust_merton {

/// Generalised uniform diversification, (h / 1^T Gamma^{-1} 1) Gamma^{-1} 1.
/// The robust strategy tends to this as kappa grows; for Gamma = I it is (h/d) 1.
Vector limit_strategy(const Matrix& shape, double h);

struct AsymptoticRow {
  double kappa = 0.0;
  double psi = 0.0;
  double psi_over_kappa = 0.0;
  double drift_direction_error = 0.0;  // |mu*/kappa + 1/|tau^{-1} 1||
  double dist_to_limit = 0.0;          // |pi* - limit_strategy|
  RobustSolution solution;
};

/// One row per kappa. kappas must be positive and strictly ascending
/// (Error(InvalidArgument) otherwise).
std::vector<AsymptoticRow> asymptotic_diagnostics(const RobustProblem& problem,
                                                  std::span<const double> kappas);
std::vector<AsymptoticRow> asymptotic_diagnostics(const MarketModel& market,
                                                  const InvestorProfile& profile,
                                                  const UncertaintySet& uncertainty,
                                                  std::span<const double> kappas);

/// Geometric grid lo, ..., hi with n points (n >= 2, 0 < lo < hi).
std::vector<double> geometric_grid(double lo, double hi, int n);
/// Linear grid lo, ..., hi with n points (n >= 2, lo < hi).
std::vector<double> linear_grid(double lo, double hi, int n);

enum class MetricScale {
  CertaintyEquivalent,  // differences of certainty equivalents (the standard definition)
  ExpectedUtility,      // differences of expected utilities
};

/// Cost of ambiguity and reward for distributional robustness.
///
/// pi_hat is the constrained Merton strategy for the reference drift nu,
/// pi* the robust strategy. The four certainty equivalents are
///   ce_nu_hat      = CE(E_nu [U(pi_hat)])    ce_nu_star    = CE(E_nu [U(pi*)])
///   ce_mustar_star = CE(E_mu*[U(pi*)])       ce_mustar_hat = CE(E_mu*[U(pi_hat)])
/// and COA = ce_nu_hat - ce_nu_star, RDR = ce_mustar_star - ce_mustar_hat.
struct RobustnessReport {
  MetricScale scale = MetricScale::CertaintyEquivalent;
  double coa = 0.0;
  double rdr = 0.0;
  double ce_nu_hat = 0.0;
  double ce_nu_star = 0.0;
  double ce_mustar_star = 0.0;
  double ce_mustar_hat = 0.0;
  /// Closed forms x0 e^{rT} Lbar exp(T(...)); certainty-equivalent scale only.
  double coa_closed_form = 0.0;
  double rdr_closed_form = 0.0;
  /// Lbar = 1 - exp(-T (mu*-nu)^T A (mu*-nu) / (2(1-gamma))).
  double loss_factor = 0.0;
  Vector pi_hat;
  RobustSolution solution;
};

RobustnessReport compute_coa_rdr(const RobustProblem& problem,
                                 MetricScale scale = MetricScale::CertaintyEquivalent);
RobustnessReport compute_coa_rdr(const MarketModel& market, const InvestorProfile& profile,
                                 const UncertaintySet& uncertainty,
                                 MetricScale scale = MetricScale::CertaintyEquivalent);

struct ConstraintComparison {
  double kappa = 0.0;
  double h = 0.0;
  double h_prime = 0.0;
  double value_h = 0.0;
  double value_h_prime = 0.0;
  double ce_h = 0.0;
  double ce_h_prime = 0.0;
  /// value(h') <= value(h), decided on certainty equivalents so the
  /// comparison survives overflow of the plain utilities.
  bool h_prime_not_better = false;
  /// c^T mu*(kappa) at level h; the comparison is guaranteed once it is <= 0.
  double c_dot_mu_star = 0.0;
};

/// Robust values at constraint levels h (from the problem) and h' >= h.
/// Throws Error(InvalidArgument) if h' < h.
ConstraintComparison compare_constraint_levels(const RobustProblem& problem, double h_prime);

struct ConstraintScan {
  std::vector<ConstraintComparison> rows;
  /// Smallest grid kappa from which value(h') <= value(h) holds on every
  /// later grid point. Only an observation on the grid.
  std::optional<double> observed_threshold;
};

ConstraintScan scan_constraint_levels(const RobustProblem& problem, double h_prime,
                                      std::span<const double> kappas);

}  // namespace robust_merton
