#include "cli/verify.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include <robust_merton/oracle.hpp>

namespace robust_merton::cli {

namespace {

std::string sci(double v) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(3) << v;
  return os.str();
}

CheckResult check(std::string name, bool ok, std::string detail) {
  return {std::move(name), ok, false, std::move(detail)};
}

CheckResult skipped(std::string name, std::string why) { return {std::move(name), true, true, std::move(why)}; }

}  // namespace

std::vector<CheckResult> run_verification(const RobustProblem& problem, const VerifyOptions& options) {
  std::vector<CheckResult> out;
  const auto& market = problem.market;
  const auto& geometry = problem.geometry;
  const auto& spectral = problem.spectral;
  const auto& uncertainty = problem.uncertainty;
  const double kappa = uncertainty.kappa();
  const auto d = uncertainty.d();

  {
    const double tol = kIdentityTolerance * (1.0 + geometry.A.cwiseAbs().maxCoeff());
    const IdentityReport rep = check_identities(geometry, market, tol);
    out.push_back(check("identities", rep.passed(),
                        "max deviation " + sci(rep.max_deviation()) + " (tol " + sci(tol) + ")"));
  }
  {
    const Matrix M = spectral.tau.transpose() * geometry.A * spectral.tau;
    const Matrix& V = spectral.eigenvectors;
    const double m_scale = 1.0 + M.cwiseAbs().maxCoeff();
    const double recon = (V * spectral.eigenvalues.asDiagonal() * V.transpose() - M).cwiseAbs().maxCoeff();
    const double ortho = (V.transpose() * V - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
    const double kernel = (M * V.col(0)).norm();
    const double chol = (spectral.tau * spectral.tau.transpose() - uncertainty.shape()).cwiseAbs().maxCoeff();
    const bool ok = recon <= 1e-9 * m_scale && ortho <= 1e-12 &&
                    kernel <= 1e-9 * (1.0 + spectral.eigenvalues.maxCoeff()) &&
                    chol <= 1e-12 * (1.0 + uncertainty.shape().cwiseAbs().maxCoeff()) &&
                    spectral.eigenvalues(0) == 0.0 && (d < 2 || spectral.eigenvalues(1) > 0.0);
    out.push_back(check("spectral", ok,
                        "reconstruction " + sci(recon) + ", orthonormality " + sci(ortho) +
                            ", kernel " + sci(kernel) + ", cholesky " + sci(chol)));
  }

  const RobustSolution sol = solve_robust(problem);

  if (kappa > 0.0) {
    const PsiEquation F(spectral, geometry, problem.profile, uncertainty.nu());
    const double psi = *sol.psi;
    const double residual = std::abs(F(psi) - kappa * kappa);
    const double boundary = std::abs(sol.rho_star->norm() - kappa);
    const double a1 = std::abs(sol.rho_star->dot(spectral.eigenvectors.col(0)) + psi);
    const bool ok = psi > 0.0 && psi <= kappa && residual <= 1e-12 * kappa * kappa &&
                    boundary <= 1e-9 * kappa && a1 <= 1e-10 * std::max(1.0, kappa);
    out.push_back(check("psi-equation", ok,
                        "psi/kappa " + sci(psi / kappa) + ", residual " + sci(residual) +
                            ", | |rho*| - kappa | " + sci(boundary)));

    WorstCase worst{sol.mu_star, *sol.rho_star, *sol.rho_perp, psi};
    const Vector dual = robust_strategy_dual(worst, spectral, problem.profile, uncertainty);
    const double mismatch = (dual - sol.pi_star).cwiseAbs().maxCoeff();
    const double budget = std::abs(sol.pi_star.sum() - problem.profile.h());
    const bool dual_ok = mismatch <= 1e-9 * std::max(1.0, sol.pi_star.cwiseAbs().maxCoeff()) &&
                         budget <= 1e-12 * std::max(1.0, problem.profile.h()) * static_cast<double>(d);
    out.push_back(check("dual-strategy", dual_ok,
                        "representation gap " + sci(mismatch) + ", budget error " + sci(budget)));
  } else {
    out.push_back(skipped("psi-equation", "kappa = 0"));
    out.push_back(skipped("dual-strategy", "kappa = 0"));
  }

  {
    const SaddleReport rep = verify_saddle_point(problem, sol, options.n_samples, options.seed);
    out.push_back(check("saddle-point", rep.passed(),
                        "investor gain " + sci(rep.investor_gain) + ", market gain " + sci(rep.market_gain) +
                            ", minimax gap " + sci(rep.minimax_gap) +
                            (rep.passed() ? std::string() : " [" + rep.violation + "]")));
  }

  if (kappa > 0.0 && (d <= 3 || options.force_oracle)) {
    auto g = [&](const Vector& rho) {
      return evaluate_g(rho, spectral, geometry, problem.profile, uncertainty.nu());
    };
    const BruteForceResult bf =
        brute_force_worst_case(g, static_cast<int>(d), kappa, options.oracle_grid, 200, options.seed);
    const double g_solver = g(*sol.rho_star);
    out.push_back(check("brute-force-oracle", g_solver <= bf.g_best + 1e-8,
                        "g(rho*) - oracle min " + sci(g_solver - bf.g_best)));
  } else {
    out.push_back(skipped("brute-force-oracle", kappa > 0.0 ? "d > 3 (use --force-oracle)" : "kappa = 0"));
  }

  {
    const McEstimate mc = mc_expected_utility(market, sol.pi_star, sol.mu_star, problem.profile.gamma(),
                                              options.n_paths, options.seed);
    const double gap = std::abs(mc.mean - sol.value);
    out.push_back(check("monte-carlo", gap <= 3.0 * mc.std_error,
                        "|mc - closed form| " + sci(gap) + " vs 3 stderr " + sci(3.0 * mc.std_error) +
                            " (" + std::to_string(mc.n_paths) + " paths)"));
  }
  return out;
}

void print_check_table(std::ostream& out, const std::vector<CheckResult>& checks) {
  for (const auto& c : checks) {
    const char* status = c.skipped ? "SKIP" : (c.passed ? "PASS" : "FAIL");
    out << std::left << std::setw(20) << c.name << std::setw(6) << status << c.detail << '\n';
  }
}

}  // namespace robust_merton::cli
