#include "robust_merton/asymptotics.hpp"

#include <cmath>

#include "robust_merton/spectral.hpp"

namespace robust_merton {

Vector limit_strategy(const Matrix& shape, double h) {
  if (!(h > 0.0)) throw Error(ErrorKind::InvalidProfile, "constraint level h must be positive");
  const Matrix tau = cholesky_factor(shape);
  const Vector tau_inv_one = tau.triangularView<Eigen::Lower>().solve(Vector::Ones(shape.rows()));
  const Vector gamma_inv_one = tau.transpose().triangularView<Eigen::Upper>().solve(tau_inv_one);
  return (h / tau_inv_one.squaredNorm()) * gamma_inv_one;
}

std::vector<AsymptoticRow> asymptotic_diagnostics(const RobustProblem& problem,
                                                  std::span<const double> kappas) {
  for (std::size_t i = 0; i < kappas.size(); ++i) {
    if (!(kappas[i] > 0.0) || (i > 0 && !(kappas[i] > kappas[i - 1]))) {
      throw Error(ErrorKind::InvalidArgument, "kappa grid must be positive and strictly ascending");
    }
  }
  const Vector limit = limit_strategy(problem.uncertainty.shape(), problem.profile.h());
  const double n = problem.spectral.tau_inv_one_norm;
  const auto d = problem.uncertainty.d();

  std::vector<AsymptoticRow> rows;
  rows.reserve(kappas.size());
  for (double kappa : kappas) {
    AsymptoticRow row;
    row.kappa = kappa;
    row.solution = solve_robust(problem.with_kappa(kappa));
    row.psi = *row.solution.psi;
    row.psi_over_kappa = row.psi / kappa;
    row.drift_direction_error = (row.solution.mu_star / kappa + Vector::Constant(d, 1.0 / n)).norm();
    row.dist_to_limit = (row.solution.pi_star - limit).norm();
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<AsymptoticRow> asymptotic_diagnostics(const MarketModel& market,
                                                  const InvestorProfile& profile,
                                                  const UncertaintySet& uncertainty,
                                                  std::span<const double> kappas) {
  return asymptotic_diagnostics(prepare_problem(market, profile, uncertainty), kappas);
}

std::vector<double> geometric_grid(double lo, double hi, int n) {
  if (n < 2 || !(lo > 0.0) || !(hi > lo)) {
    throw Error(ErrorKind::InvalidArgument, "geometric grid needs 0 < lo < hi and n >= 2");
  }
  std::vector<double> grid(static_cast<std::size_t>(n));
  const double log_lo = std::log(lo);
  const double step = (std::log(hi) - log_lo) / (n - 1);
  for (int i = 0; i < n; ++i) grid[static_cast<std::size_t>(i)] = std::exp(log_lo + step * i);
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

std::vector<double> linear_grid(double lo, double hi, int n) {
  if (n < 2 || !(hi > lo)) throw Error(ErrorKind::InvalidArgument, "linear grid needs lo < hi and n >= 2");
  std::vector<double> grid(static_cast<std::size_t>(n));
  const double step = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) grid[static_cast<std::size_t>(i)] = lo + step * i;
  grid.back() = hi;
  return grid;
}

RobustnessReport compute_coa_rdr(const RobustProblem& problem, MetricScale scale) {
  const auto& market = problem.market;
  const auto& geometry = problem.geometry;
  const double gamma = problem.profile.gamma();
  const double h = problem.profile.h();
  const double T = market.horizon();
  const Vector& nu = problem.uncertainty.nu();

  RobustnessReport report;
  report.scale = scale;
  report.solution = solve_robust(problem);
  report.pi_hat = merton_constrained(geometry, problem.profile, nu);
  const Vector& pi_star = report.solution.pi_star;
  const Vector& mu_star = report.solution.mu_star;

  const LogSpaceUtility nu_hat = expected_utility_log(market, report.pi_hat, nu, gamma);
  const LogSpaceUtility nu_star = expected_utility_log(market, pi_star, nu, gamma);
  const LogSpaceUtility mustar_star = expected_utility_log(market, pi_star, mu_star, gamma);
  const LogSpaceUtility mustar_hat = expected_utility_log(market, report.pi_hat, mu_star, gamma);

  report.ce_nu_hat = nu_hat.certainty_equivalent();
  report.ce_nu_star = nu_star.certainty_equivalent();
  report.ce_mustar_star = mustar_star.certainty_equivalent();
  report.ce_mustar_hat = mustar_hat.certainty_equivalent();

  if (scale == MetricScale::CertaintyEquivalent) {
    report.coa = report.ce_nu_hat - report.ce_nu_star;
    report.rdr = report.ce_mustar_star - report.ce_mustar_hat;
  } else {
    report.coa = nu_hat.value() - nu_star.value();
    report.rdr = mustar_star.value() - mustar_hat.value();
  }

  // Closed forms. mu* - nu = tau rho*, and A tau v_1 = 0, so only the part
  // of rho* orthogonal to v_1 enters the quadratic forms.
  const double q = 1.0 / (1.0 - gamma);
  Vector shift_perp = Vector::Zero(nu.size());
  if (report.solution.rho_perp) shift_perp = problem.spectral.tau * *report.solution.rho_perp;
  const double shift_quad = shift_perp.dot(geometry.A * shift_perp);
  report.loss_factor = -std::expm1(-0.5 * T * q * shift_quad);

  const double base = -h * market.r() -
                      0.5 * (1.0 - gamma) * h * h * geometry.c.dot(market.covariance() * geometry.c);
  const Vector mu_perp = nu + shift_perp;  // A mu* = A mu_perp
  const double growth = market.x0() * std::exp(market.r() * T);
  report.coa_closed_form =
      growth * report.loss_factor *
      std::exp(T * (base + h * geometry.c.dot(nu) + 0.5 * q * nu.dot(geometry.A * nu)));
  report.rdr_closed_form =
      growth * report.loss_factor *
      std::exp(T * (base + h * geometry.c.dot(mu_star) + 0.5 * q * mu_perp.dot(geometry.A * mu_perp)));
  return report;
}

RobustnessReport compute_coa_rdr(const MarketModel& market, const InvestorProfile& profile,
                                 const UncertaintySet& uncertainty, MetricScale scale) {
  return compute_coa_rdr(prepare_problem(market, profile, uncertainty), scale);
}

ConstraintComparison compare_constraint_levels(const RobustProblem& problem, double h_prime) {
  const double h = problem.profile.h();
  if (!(h_prime >= h)) {
    throw Error(ErrorKind::InvalidArgument, "comparison needs h' >= h");
  }
  RobustProblem other = problem;
  other.profile = InvestorProfile(problem.profile.gamma(), h_prime);

  const RobustSolution base = solve_robust(problem);
  const RobustSolution raised = solve_robust(other);

  ConstraintComparison out;
  out.kappa = problem.uncertainty.kappa();
  out.h = h;
  out.h_prime = h_prime;
  out.value_h = base.value;
  out.value_h_prime = raised.value;
  out.ce_h = base.ce;
  out.ce_h_prime = raised.ce;
  out.h_prime_not_better = raised.ce <= base.ce;
  out.c_dot_mu_star = problem.geometry.c.dot(base.mu_star);
  return out;
}

ConstraintScan scan_constraint_levels(const RobustProblem& problem, double h_prime,
                                      std::span<const double> kappas) {
  ConstraintScan scan;
  for (double kappa : kappas) {
    scan.rows.push_back(compare_constraint_levels(problem.with_kappa(kappa), h_prime));
  }
  for (std::size_t i = scan.rows.size(); i-- > 0;) {
    if (!scan.rows[i].h_prime_not_better) break;
    scan.observed_threshold = scan.rows[i].kappa;
  }
  return scan;
}

}  // namespace robust_merton
