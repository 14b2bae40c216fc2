// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 iff all pass.
//
//   acceptance [criterion-number ...]
//
// Seeds are fixed below and were chosen before the first run.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "support/fixtures.hpp"

using namespace robust_merton;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double time_limit_s;  // <= 0 means no runtime bound
  std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void note(Outcome& o, bool ok, const std::string& what) {
  if (!o.detail.empty()) o.detail += "; ";
  o.detail += what;
  if (!ok) {
    o.passed = false;
    o.detail += " [violated]";
  }
}

// ---------------------------------------------------------------------------

Outcome identities() {
  RandomStream rng(0xA11CE);
  double worst = 0.0;
  auto check = [&](const MarketModel& market) {
    const IdentityReport rep = check_identities(build_constraint_geometry(market), market, 1e-9);
    worst = std::max(worst, rep.max_deviation());
  };
  for (int k = 0; k < 50; ++k) {
    const int d = 2 + static_cast<int>(rng.uniform() * 9);
    const int m = d + static_cast<int>(rng.uniform() * 4);
    check(MarketModel(rm_test::random_sigma(d, m, rng), 0.01, 1.0, 1.0));
  }
  check(rm_test::example8_market());
  Outcome o;
  note(o, worst <= 1e-9, fmt("51 markets, max deviation %.3e <= 1e-9", worst));
  return o;
}

Outcome symmetric_instance() {
  const double kappa = 0.1;
  const RobustSolution sol = solve_robust(rm_test::symmetric_problem(kappa));
  const double shift = kappa / std::sqrt(2.0);
  const double e_pi = (sol.pi_star - Vector::Constant(2, 0.5)).cwiseAbs().maxCoeff();
  const double e_psi = std::abs(sol.psi.value_or(0.0) - kappa);
  const double e_mu = (sol.mu_star - Vector::Constant(2, 0.3 - shift)).cwiseAbs().maxCoeff();
  const double e_val = std::abs(sol.value - (0.3 - shift - 0.25));
  Outcome o;
  note(o, e_pi <= 1e-12, fmt("|pi* - (0.5, 0.5)| %.2e", e_pi));
  note(o, e_psi <= 1e-12, fmt("|psi - kappa| %.2e", e_psi));
  note(o, e_mu <= 1e-12, fmt("|mu* - (nu - kappa/sqrt2)| %.2e", e_mu));
  note(o, e_val <= 1e-12, fmt("|value - (0.05 - kappa/sqrt2)| %.2e (tol 1e-12)", e_val));
  return o;
}

Outcome brute_force_oracle() {
  RandomStream rng(0xB0A7);
  const double gammas[] = {-1.0, 0.0, 0.5, -0.3};
  double worst_excess = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < 20; ++k) {
    const int d = 2 + k % 2;
    const auto p = rm_test::random_problem({d, d + k % 3, gammas[k % 4], 0.05, 1.5}, rng);
    const RobustSolution sol = solve_robust(p);
    auto g = [&](const Vector& rho) {
      return evaluate_g(rho, p.spectral, p.geometry, p.profile, p.uncertainty.nu());
    };
    const BruteForceResult res =
        brute_force_worst_case(g, d, p.uncertainty.kappa(), 100000, 200, 0xB0A7 + static_cast<std::uint64_t>(k));
    worst_excess = std::max(worst_excess, g(*sol.rho_star) - res.g_best);
  }
  Outcome o;
  note(o, worst_excess <= 1e-8, fmt("20 instances, max g(rho*) - oracle min %.3e <= 1e-8", worst_excess));
  return o;
}

Outcome saddle_point() {
  RandomStream rng(0x5ADD1E);
  const double gammas[] = {-1.0, 0.0, 0.5};
  double worst_slack = std::numeric_limits<double>::infinity();
  double worst_gap = 0.0;
  Outcome o;
  for (int k = 0; k < 10; ++k) {
    const int d = 2 + k % 7;
    const auto p = rm_test::random_problem({d, d + k % 2, gammas[k % 3], 0.05, 1.0}, rng);
    const RobustSolution sol = solve_robust(p);
    const SaddleReport rep = verify_saddle_point(p, sol, 10000, 0x5ADD1E + static_cast<std::uint64_t>(k));
    const double scale = 1.0 + std::abs(sol.value);
    // Slack of both saddle inequalities, normalised by (1 + |value|).
    worst_slack = std::min(worst_slack, -std::max(rep.investor_gain, rep.market_gain) / scale);
    const double gap = std::abs(optimal_value_given_mu(p.market, p.profile, sol.mu_star) - sol.value) / scale;
    worst_gap = std::max(worst_gap, gap);
    if (!rep.passed()) note(o, false, fmt("instance %d: %s", k, rep.violation.c_str()));
  }
  note(o, worst_slack >= -1e-8, fmt("10 instances x 1e4 pairs, min slack %.3e >= -1e-8", worst_slack));
  note(o, worst_gap <= 1e-10, fmt("max |V(mu*) - value| %.3e <= 1e-10 (relative to 1+|value|)", worst_gap));
  return o;
}

Outcome asymptotics() {
  const double kappa = 1e6;
  Outcome o;
  auto run = [&](const char* label, const Matrix& shape) {
    const auto p = rm_test::example8_problem_with_shape(0.0, kappa, shape);
    const RobustSolution sol = solve_robust(p);
    const Vector limit = limit_strategy(shape, 1.0);
    const double e_psi = std::abs(*sol.psi / kappa - 1.0);
    const double e_mu = (sol.mu_star / kappa + Vector::Ones(8) / p.spectral.tau_inv_one_norm).norm();
    const double e_pi = (sol.pi_star - limit).norm();
    note(o, e_psi <= 1e-5, fmt("%s: |psi/kappa - 1| %.2e", label, e_psi));
    note(o, e_mu <= 1e-4, fmt("|mu*/kappa + 1/|tau^-1 1|| %.2e", e_mu));
    note(o, e_pi <= 1e-4, fmt("|pi* - limit| %.2e", e_pi));
  };
  run("Gamma=I", Matrix::Identity(8, 8));
  Matrix diag = Matrix::Zero(8, 8);
  for (int i = 0; i < 8; ++i) diag(i, i) = (i + 1.0) * (i + 1.0);
  run("Gamma=diag(1,4,..,64)", diag);
  return o;
}

Outcome coa_rdr() {
  const double gammas[] = {-1.0, -0.5, -0.1, 0.0, 0.1, 0.5};
  const auto grid = geometric_grid(0.01, 2.0, 40);
  const auto long_grid = geometric_grid(1e-2, 1e8, 41);
  const double wealth = 1.0;  // x0 e^{rT} for the reference market
  double worst_order = 0.0;   // max violation of COA >= RDR >= 0, relative
  double worst_closed = 0.0;
  double worst_rdr_tail = 0.0;
  double worst_plateau = 0.0;
  for (double gamma : gammas) {
    const auto base = rm_test::example8_problem(gamma, 0.5);
    for (double kappa : grid) {
      const RobustnessReport rep = compute_coa_rdr(base.with_kappa(kappa));
      const double scale = std::max(std::abs(rep.coa), std::abs(rep.rdr));
      worst_order = std::max(worst_order, (rep.rdr - rep.coa) / std::max(scale, 1e-300));
      worst_order = std::max(worst_order, -rep.rdr / std::max(rep.ce_mustar_star, 1e-300));
      worst_closed = std::max(worst_closed, std::abs(rep.coa - rep.coa_closed_form) / std::abs(rep.coa));
      worst_closed = std::max(worst_closed, std::abs(rep.rdr - rep.rdr_closed_form) / std::abs(rep.rdr));
    }
    worst_rdr_tail = std::max(worst_rdr_tail, compute_coa_rdr(base.with_kappa(1e4)).rdr);
    // Plateau over the last two decades of the long grid, [1e6, 1e8].
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (double kappa : long_grid) {
      if (kappa < 1e6 * (1 - 1e-12)) continue;
      const double coa = compute_coa_rdr(base.with_kappa(kappa)).coa;
      lo = std::min(lo, coa);
      hi = std::max(hi, coa);
    }
    worst_plateau = std::max(worst_plateau, hi - lo);
  }
  Outcome o;
  note(o, worst_order <= 1e-10, fmt("6 gammas x 40 radii, max relative violation of COA >= RDR >= 0 %.2e", worst_order));
  note(o, worst_closed <= 1e-9, fmt("closed form vs definition %.2e <= 1e-9", worst_closed));
  note(o, worst_rdr_tail <= 1e-6 * wealth, fmt("RDR(1e4) %.2e <= 1e-6", worst_rdr_tail));
  note(o, worst_plateau <= 1e-4 * wealth, fmt("COA spread on [1e6, 1e8] %.2e <= 1e-4", worst_plateau));
  return o;
}

Outcome convergence_ordering() {
  const Vector eq = Vector::Constant(8, 0.125);
  const RobustSolution high = solve_robust(rm_test::example8_problem(0.9, 0.5));
  const RobustSolution low = solve_robust(rm_test::example8_problem(-2.0, 0.5));
  const double d_high = (high.pi_star - eq).norm();
  const double d_low = (low.pi_star - eq).norm();
  Outcome o;
  note(o, d_high < d_low, fmt("|pi*(0.9) - 1/8| %.4f < |pi*(-2) - 1/8| %.4f", d_high, d_low));
  note(o, high.pi_star.minCoeff() > 0.1 && high.pi_star.maxCoeff() < 0.15,
       fmt("pi*(0.9) in [%.4f, %.4f] within (0.1, 0.15)", high.pi_star.minCoeff(), high.pi_star.maxCoeff()));
  return o;
}

Outcome monte_carlo() {
  struct Triple {
    const char* label;
    Vector pi;
    Vector mu;
    double gamma;
  };
  std::vector<Triple> triples;
  const Vector nu = Vector::Constant(8, 0.3);
  for (double gamma : {-1.0, 0.0, 0.5}) {
    const auto p = rm_test::example8_problem(gamma, 0.5);
    const RobustSolution sol = solve_robust(p);
    triples.push_back({"(pi*, mu*)", sol.pi_star, sol.mu_star, gamma});
    triples.push_back({"(pi_hat, nu)", merton_constrained(p.geometry, p.profile, nu), nu, gamma});
    triples.push_back({"(1/8, mu*)", Vector::Constant(8, 0.125), sol.mu_star, gamma});
  }
  const MarketModel market = rm_test::example8_market();
  Outcome o;
  double worst = 0.0;
  for (std::size_t k = 0; k < triples.size(); ++k) {
    const auto& t = triples[k];
    const McEstimate est = mc_expected_utility(market, t.pi, t.mu, t.gamma, 1000000, 0x3C0000 + k);
    const double closed = expected_utility_constant(market, t.pi, t.mu, t.gamma);
    const double z = std::abs(est.mean - closed) / est.std_error;
    worst = std::max(worst, z);
    if (!(z <= 3.0)) note(o, false, fmt("gamma %g %s: %.2f stderr", t.gamma, t.label, z));
  }
  note(o, worst <= 3.0, fmt("9 triples at 1e6 paths, max |mc - closed| %.2f stderr <= 3", worst));
  return o;
}

Outcome constraint_levels() {
  const ConstraintComparison cmp = compare_constraint_levels(rm_test::example8_problem(0.5, 10.0), 1.5);
  Outcome o;
  note(o, cmp.value_h_prime <= cmp.value_h,
       fmt("value(h'=1.5) %.6e <= value(h=1) %.6e", cmp.value_h_prime, cmp.value_h));
  note(o, cmp.c_dot_mu_star < 0.0, fmt("c^T mu* %.4f < 0", cmp.c_dot_mu_star));
  return o;
}

Outcome bond_only() {
  Outcome o;
  auto pair = [&](const char* label, const UncertaintySet& u, double r) {
    const Vector gap = Vector::Constant(u.d(), r) - u.nu();
    const double q = gap.dot(u.shape().llt().solve(gap));
    const double boundary = std::sqrt(q);
    const bool inside = bond_only_optimal(u.with_kappa(boundary * (1 - 1e-9)), r);
    const bool outside = bond_only_optimal(u.with_kappa(boundary * (1 + 1e-9)), r);
    note(o, !inside && outside,
         fmt("%s: boundary %.6f, below -> %s, above -> %s", label, boundary, inside ? "true" : "false",
             outside ? "true" : "false"));
  };
  pair("8-asset", rm_test::example8_problem(0.0, 0.5).uncertainty, 0.0);
  Matrix shape(3, 3);
  shape << 2.0, 0.3, 0.1,
           0.3, 1.0, 0.2,
           0.1, 0.2, 0.5;
  Vector nu(3);
  nu << 0.08, 0.02, 0.11;
  pair("3-asset, r=0.04", UncertaintySet(nu, shape, 0.1), 0.04);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "constraint identities on random markets", 1.0, identities},
      {2, "hand-computable symmetric instance", 0.0, symmetric_instance},
      {3, "brute-force oracle equivalence", 30.0, brute_force_oracle},
      {4, "saddle point and minimax equality", 60.0, saddle_point},
      {5, "large-radius asymptotics", 5.0, asymptotics},
      {6, "cost of ambiguity and reward for robustness", 10.0, coa_rdr},
      {7, "faster convergence for higher gamma", 0.0, convergence_ordering},
      {8, "Monte Carlo consistency", 60.0, monte_carlo},
      {9, "tighter constraint level is not better", 0.0, constraint_levels},
      {10, "bond-only optimality boundary", 0.0, bond_only},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string timing = fmt("%.2f s", secs);
    if (c.time_limit_s > 0) {
      timing += fmt(" (limit %g s)", c.time_limit_s);
      if (secs >= c.time_limit_s) {
        out.passed = false;
        timing += " [too slow]";
      }
    }
    if (!out.passed) ++failures;
    std::printf("%s  AC-%02d  %-45s  %s  | %s\n", out.passed ? "PASS" : "FAIL", c.id, c.name, timing.c_str(),
                out.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
