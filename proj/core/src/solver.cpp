#include "robust_merton/solver.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "robust_merton/random.hpp"

namespace robust_merton {

namespace {

void require_dimension(const Vector& v, int d, const char* what) {
  if (v.size() != d) {
    throw Error(ErrorKind::InvalidDimension,
                std::string(what) + " must have dimension " + std::to_string(d));
  }
}

double risk_tolerance(const InvestorProfile& profile) { return 1.0 / (1.0 - profile.gamma()); }

}  // namespace

RobustProblem RobustProblem::with_kappa(double kappa) const {
  RobustProblem copy = *this;
  copy.uncertainty = uncertainty.with_kappa(kappa);
  return copy;
}

RobustProblem RobustProblem::with_gamma(double gamma) const {
  RobustProblem copy = *this;
  copy.profile = InvestorProfile(gamma, profile.h());
  return copy;
}

RobustProblem prepare_problem(const MarketModel& market, const InvestorProfile& profile,
                              const UncertaintySet& uncertainty) {
  if (market.d() != uncertainty.d()) {
    throw Error(ErrorKind::InvalidDimension,
                "market has d=" + std::to_string(market.d()) + " assets but nu has dimension " +
                    std::to_string(uncertainty.d()));
  }
  ConstraintGeometry geometry = build_constraint_geometry(market);
  SpectralData spectral = spectral_decompose(geometry, cholesky_factor(uncertainty.shape()));
  return {market, profile, uncertainty, std::move(geometry), std::move(spectral)};
}

Vector merton_constrained(const ConstraintGeometry& geometry, const InvestorProfile& profile,
                          const Vector& mu) {
  require_dimension(mu, static_cast<int>(geometry.c.size()), "mu");
  return risk_tolerance(profile) * (geometry.A * mu) + profile.h() * geometry.c;
}

LogSpaceUtility optimal_value_given_mu_log(const MarketModel& market, const InvestorProfile& profile,
                                           const Vector& mu) {
  const int d = market.d();
  require_dimension(mu, d, "mu");
  const double gamma = profile.gamma();
  const double h = profile.h();
  const double r = market.r();
  const double T = market.horizon();

  const Matrix D = build_difference_matrix(d);
  const Matrix sigma_red = D * market.sigma();
  const Vector sigma_col_d = market.sigma().row(d - 1).transpose();  // sigma^T e_d
  const Vector cov_col_d = market.covariance().col(d - 1);           // sigma sigma^T e_d

  const double r_red = (1.0 - h) * r + h * mu(d - 1) -
                       0.5 * (1.0 - gamma) * (h * sigma_col_d).squaredNorm();
  const Vector ones_red = Vector::Ones(d - 1);
  const Vector mu_red = D * mu - h * (1.0 - gamma) * (D * cov_col_d) + r_red * ones_red;
  const Vector excess = mu_red - r_red * ones_red;

  Eigen::LLT<Matrix> llt(sigma_red * sigma_red.transpose());
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::SingularGeometry, "reduced covariance is not positive definite");
  }
  const double quad = excess.dot(llt.solve(excess));

  if (gamma == 0.0) {
    return {0.0, std::log(market.x0()) + (r_red + 0.5 * quad) * T};
  }
  const double exponent = gamma * std::log(market.x0()) +
                          gamma * T * (r_red + quad / (2.0 * (1.0 - gamma))) -
                          std::log(std::abs(gamma));
  return {gamma, exponent};
}

double optimal_value_given_mu(const MarketModel& market, const InvestorProfile& profile,
                              const Vector& mu) {
  return optimal_value_given_mu_log(market, profile, mu).value();
}

double evaluate_g(const Vector& rho, const SpectralData& spectral, const ConstraintGeometry& geometry,
                  const InvestorProfile& profile, const Vector& nu) {
  const double q = risk_tolerance(profile);
  const Vector t_rho = spectral.tau * rho;
  const Vector linear = profile.h() * geometry.c + q * (geometry.A * nu);
  return 0.5 * q * t_rho.dot(geometry.A * t_rho) + linear.dot(t_rho);
}

PsiEquation::PsiEquation(const SpectralData& spectral, const ConstraintGeometry& geometry,
                         const InvestorProfile& profile, const Vector& nu)
    : lambda_(spectral.eigenvalues),
      inv_one_norm_(spectral.tau_inv_one_norm),
      h_(profile.h()),
      risk_tolerance_(risk_tolerance(profile)) {
  const Vector tau_c = spectral.tau.transpose() * geometry.c;
  const Vector tau_inv_nu = spectral.tau.triangularView<Eigen::Lower>().solve(nu);
  const Matrix& V = spectral.eigenvectors;
  projections_ = h_ * (V.transpose() * tau_c) +
                 risk_tolerance_ * lambda_.cwiseProduct(V.transpose() * tau_inv_nu);
}

double PsiEquation::coefficient(int i, double psi) const {
  // -(lambda q + h/(psi n))^{-1} b, rewritten to stay finite as psi -> 0.
  const double psi_n = psi * inv_one_norm_;
  return -psi_n * projections_(i) / (lambda_(i) * risk_tolerance_ * psi_n + h_);
}

double PsiEquation::operator()(double psi) const {
  double total = psi * psi;
  for (Eigen::Index i = 1; i < lambda_.size(); ++i) {
    const double a = coefficient(static_cast<int>(i), psi);
    total += a * a;
  }
  return total;
}

double solve_psi(const SpectralData& spectral, const ConstraintGeometry& geometry,
                 const InvestorProfile& profile, const Vector& nu, double kappa) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    throw Error(ErrorKind::InvalidRadius, "psi is only defined for kappa > 0");
  }
  const PsiEquation F(spectral, geometry, profile, nu);
  const double target = kappa * kappa;

  double lo = kPsiLowerFraction * kappa;
  double hi = kappa;
  double f_hi = F(hi) - target;
  if (f_hi <= 0.0) return kappa;  // every i >= 2 term vanishes
  double f_lo = F(lo) - target;
  if (f_lo >= 0.0) {
    throw Error(ErrorKind::Convergence, "psi equation has no sign change on (0, kappa]");
  }

  const double tol = kPsiTolerance * kappa;
  int iter = 0;
  for (; iter < kPsiMaxIterations && hi - lo > tol; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = F(mid) - target;
    if (f_mid < 0.0) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
      f_hi = f_mid;
    }
  }
  if (hi - lo > tol) {
    throw Error(ErrorKind::Convergence, "psi bisection did not converge in " +
                                            std::to_string(kPsiMaxIterations) + " iterations");
  }

  // One secant step inside the final bracket; keep whichever point is best.
  double best = std::abs(f_lo) < std::abs(f_hi) ? lo : hi;
  double best_res = std::min(std::abs(f_lo), std::abs(f_hi));
  if (f_hi != f_lo) {
    const double secant = std::clamp(lo - f_lo * (hi - lo) / (f_hi - f_lo), lo, hi);
    const double res = std::abs(F(secant) - target);
    if (res < best_res) best = secant;
  }
  return best;
}

WorstCase worst_case_drift(const SpectralData& spectral, const ConstraintGeometry& geometry,
                           const InvestorProfile& profile, const UncertaintySet& uncertainty) {
  const double psi = solve_psi(spectral, geometry, profile, uncertainty.nu(), uncertainty.kappa());
  const PsiEquation F(spectral, geometry, profile, uncertainty.nu());

  const Matrix& V = spectral.eigenvectors;
  Vector perp = Vector::Zero(V.rows());
  for (Eigen::Index i = 1; i < V.cols(); ++i) {
    perp += F.coefficient(static_cast<int>(i), psi) * V.col(i);
  }
  Vector rho = perp - psi * V.col(0);
  Vector mu = uncertainty.nu() + spectral.tau * rho;
  return {std::move(mu), std::move(rho), std::move(perp), psi};
}

Vector robust_strategy_dual(const WorstCase& worst, const SpectralData& spectral,
                            const InvestorProfile& profile, const UncertaintySet& /*uncertainty*/) {
  // Gamma^{-1}(mu* - nu) = tau^{-T} rho*.
  const Vector scaled = spectral.tau.transpose().triangularView<Eigen::Upper>().solve(worst.rho_star);
  return (-profile.h() / (worst.psi * spectral.tau_inv_one_norm)) * scaled;
}

Vector robust_strategy(const WorstCase& worst, const SpectralData& spectral,
                       const ConstraintGeometry& geometry, const InvestorProfile& profile,
                       const UncertaintySet& uncertainty) {
  // A tau v_1 = 0 exactly, so only the part of rho* orthogonal to v_1 enters.
  const Vector a_mu = geometry.A * uncertainty.nu() + geometry.A * (spectral.tau * worst.rho_perp);
  Vector pi = risk_tolerance(profile) * a_mu + profile.h() * geometry.c;

  const Vector dual = robust_strategy_dual(worst, spectral, profile, uncertainty);
  const double scale = std::max(1.0, pi.cwiseAbs().maxCoeff());
  const double mismatch = (pi - dual).cwiseAbs().maxCoeff();
  if (!(mismatch <= 1e-9 * scale)) {
    std::ostringstream os;
    os.precision(6);
    os << "the two representations of pi* differ by " << mismatch;
    throw Error(ErrorKind::InternalConsistency, os.str());
  }
  const double budget_error = std::abs(pi.sum() - profile.h());
  if (!(budget_error <= 1e-12 * std::max(1.0, profile.h()) * pi.size())) {
    std::ostringstream os;
    os.precision(6);
    os << "<pi*, 1> misses h by " << budget_error;
    throw Error(ErrorKind::InternalConsistency, os.str());
  }
  return pi;
}

Vector worst_case_drift_for_strategy(const Vector& theta, const UncertaintySet& uncertainty) {
  require_dimension(theta, uncertainty.d(), "theta");
  if ((theta.array() == 0.0).all()) {
    throw Error(ErrorKind::DegenerateDirection,
                "theta = 0: every drift in K is a worst case for the zero direction");
  }
  const Vector gamma_theta = uncertainty.shape() * theta;
  const double norm = std::sqrt(theta.dot(gamma_theta));
  return uncertainty.nu() - (uncertainty.kappa() / norm) * gamma_theta;
}

RobustSolution solve_robust(const RobustProblem& problem) {
  const auto& profile = problem.profile;
  const auto& uncertainty = problem.uncertainty;

  RobustSolution sol;
  sol.kappa = uncertainty.kappa();
  sol.gamma = profile.gamma();
  sol.h = profile.h();

  if (uncertainty.kappa() == 0.0) {
    sol.mu_star = uncertainty.nu();
    sol.pi_star = merton_constrained(problem.geometry, profile, uncertainty.nu());
  } else {
    WorstCase worst = worst_case_drift(problem.spectral, problem.geometry, profile, uncertainty);
    sol.pi_star = robust_strategy(worst, problem.spectral, problem.geometry, profile, uncertainty);
    sol.psi = worst.psi;
    sol.rho_star = std::move(worst.rho_star);
    sol.rho_perp = std::move(worst.rho_perp);
    sol.mu_star = std::move(worst.mu_star);
  }
  sol.utility = expected_utility_log(problem.market, sol.pi_star, sol.mu_star, profile.gamma());
  sol.value = sol.utility.value();
  sol.ce = sol.utility.certainty_equivalent();
  return sol;
}

RobustSolution solve_robust(const MarketModel& market, const InvestorProfile& profile,
                            const UncertaintySet& uncertainty) {
  return solve_robust(prepare_problem(market, profile, uncertainty));
}

namespace {

// Strategy with <pi, 1> = h. Three families: scaled Dirichlet(1,...,1)
// compositions, small moves around pi* in the 1-orthogonal hyperplane, and
// large moves around the uniform strategy.
Vector sample_strategy(int kind, const Vector& pi_star, double h, RandomStream& rng) {
  const auto d = pi_star.size();
  if (kind == 0) {
    Vector w(d);
    for (Eigen::Index i = 0; i < d; ++i) w(i) = rng.exponential();
    return (h / w.sum()) * w;
  }
  Vector dir = rng.normal_vector(d);
  dir.array() -= dir.mean();
  const double norm = dir.norm();
  if (norm > 0.0) dir /= norm;
  if (kind == 1) {
    const double step = std::pow(10.0, -4.0 + 4.0 * rng.uniform());
    return pi_star + step * dir;
  }
  const double step = 2.0 * rng.uniform();
  return Vector::Constant(d, h / static_cast<double>(d)) + step * dir;
}

}  // namespace

SaddleReport verify_saddle_point(const RobustProblem& problem, const RobustSolution& solution,
                                 int n_samples, std::uint64_t seed) {
  const auto& market = problem.market;
  const auto& uncertainty = problem.uncertainty;
  const double gamma = problem.profile.gamma();
  const auto d = uncertainty.d();

  SaddleReport report;
  report.n_samples = n_samples;
  report.seed = seed;
  const double scale = 1.0 + std::abs(solution.value);
  report.tolerance = kSaddleTolerance * scale;
  report.minimax_tolerance = kMinimaxTolerance * scale;

  const double at_saddle = expected_utility_constant(market, solution.pi_star, solution.mu_star, gamma);
  report.investor_gain = -std::numeric_limits<double>::infinity();
  report.market_gain = -std::numeric_limits<double>::infinity();

  RandomStream drift_rng(seed, 0);
  RandomStream strategy_rng(seed, 1);
  for (int k = 0; k < n_samples; ++k) {
    const Vector rho = (k % 2 == 0) ? uniform_on_sphere(d, uncertainty.kappa(), drift_rng)
                                    : uniform_in_ball(d, uncertainty.kappa(), drift_rng);
    const Vector mu = uncertainty.nu() + problem.spectral.tau * rho;
    const double market_gain = at_saddle - expected_utility_constant(market, solution.pi_star, mu, gamma);
    if (market_gain > report.market_gain) {
      report.market_gain = market_gain;
      if (market_gain > report.tolerance && report.violation.empty()) {
        report.violation = "drift sample " + std::to_string(k) + " lowers the utility of pi*";
        report.offending_mu = mu;
      }
    }

    const Vector pi = sample_strategy(k % 3, solution.pi_star, problem.profile.h(), strategy_rng);
    const double investor_gain = expected_utility_constant(market, pi, solution.mu_star, gamma) - at_saddle;
    if (investor_gain > report.investor_gain) {
      report.investor_gain = investor_gain;
      if (investor_gain > report.tolerance && report.violation.empty()) {
        report.violation = "strategy sample " + std::to_string(k) + " beats pi* under mu*";
        report.offending_pi = pi;
      }
    }
  }

  report.minimax_gap =
      std::abs(optimal_value_given_mu(market, problem.profile, solution.mu_star) - solution.value);
  if (!(report.minimax_gap <= report.minimax_tolerance) && report.violation.empty()) {
    report.violation = "sup-inf and inf-sup values differ at mu*";
  }
  return report;
}

SaddleReport verify_saddle_point(const MarketModel& market, const InvestorProfile& profile,
                                 const UncertaintySet& uncertainty, const RobustSolution& solution,
                                 int n_samples, std::uint64_t seed) {
  return verify_saddle_point(prepare_problem(market, profile, uncertainty), solution, n_samples, seed);
}

}  // namespace robust_merton
