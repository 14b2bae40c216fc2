#include <doctest.h>

#include <cmath>

#include "support/fixtures.hpp"

using namespace robust_merton;
using rm_test::max_abs;

TEST_CASE("limit strategy") {
  Matrix shape = Matrix::Zero(2, 2);
  shape.diagonal() << 1.0, 4.0;
  const Vector pi = limit_strategy(shape, 1.0);
  CHECK(pi(0) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(pi(1) == doctest::Approx(0.2).epsilon(1e-15));
  const Vector eq = limit_strategy(Matrix::Identity(8, 8), 1.0);
  CHECK(max_abs(eq - Vector::Constant(8, 0.125)) < 1e-16);
}

TEST_CASE("grids") {
  const auto g = geometric_grid(1e-2, 1e8, 41);
  REQUIRE(g.size() == 41);
  CHECK(g.front() == 1e-2);
  CHECK(g.back() == 1e8);
  CHECK(g[4] == doctest::Approx(1e-1).epsilon(1e-14));
  const auto l = linear_grid(0.01, 0.5, 50);
  REQUIRE(l.size() == 50);
  CHECK(l.back() == 0.5);
  CHECK(l[1] - l[0] == doctest::Approx(0.01).epsilon(1e-12));
  CHECK_THROWS_AS(geometric_grid(0.0, 1.0, 5), Error);
}

TEST_CASE("diagnostics reject non-ascending grids") {
  const auto p = rm_test::example8_problem(0.0, 0.5);
  const std::vector<double> bad{0.2, 0.1};
  CHECK_THROWS_AS(asymptotic_diagnostics(p, bad), Error);
  const std::vector<double> with_zero{0.0, 0.1};
  CHECK_THROWS_AS(asymptotic_diagnostics(p, with_zero), Error);
}

TEST_CASE("psi over kappa tends to one and pi* to the limit strategy") {
  const auto p = rm_test::example8_problem(0.0, 0.5);
  const auto grid = geometric_grid(1e-2, 1e8, 41);
  const auto rows = asymptotic_diagnostics(p, grid);
  REQUIRE(rows.size() == grid.size());
  for (const auto& row : rows) {
    CHECK(row.psi_over_kappa > 0.0);
    CHECK(row.psi_over_kappa <= 1.0);
  }
  CHECK(std::abs(1.0 - rows.back().psi_over_kappa) < 1e-6);
  // Strictly decreasing tail of the distance to the limit.
  for (std::size_t i = rows.size() - 10; i < rows.size(); ++i) {
    CHECK(rows[i].dist_to_limit > 0.0);
    CHECK(rows[i].dist_to_limit < rows[i - 1].dist_to_limit);
  }
  CHECK(rows.back().drift_direction_error < 1e-6);
}

TEST_CASE("symmetric instance has no cost of ambiguity") {
  const RobustnessReport rep = compute_coa_rdr(rm_test::symmetric_problem(0.1));
  CHECK(std::abs(rep.coa) < 1e-14);
  CHECK(std::abs(rep.rdr) < 1e-14);
}

TEST_CASE("cost of ambiguity dominates the reward for robustness") {
  for (double gamma : {-1.0, 0.0, 0.5}) {
    for (double kappa : {0.05, 0.5, 2.0}) {
      const RobustnessReport rep = compute_coa_rdr(rm_test::example8_problem(gamma, kappa));
      CAPTURE(gamma);
      CAPTURE(kappa);
      CHECK(rep.rdr >= 0.0);
      CHECK(rep.coa >= rep.rdr);
      CHECK(std::abs(rep.coa - rep.coa_closed_form) <= 1e-9 * std::abs(rep.coa));
      CHECK(std::abs(rep.rdr - rep.rdr_closed_form) <= 1e-9 * std::abs(rep.rdr));
      CHECK(rep.loss_factor > 0.0);
      CHECK(rep.loss_factor < 1.0);
    }
  }
}

TEST_CASE("certainty equivalents in the report are consistent") {
  const auto p = rm_test::example8_problem(-0.5, 0.3);
  const RobustnessReport rep = compute_coa_rdr(p);
  const Vector nu = p.uncertainty.nu();
  const Vector& pi_star = rep.solution.pi_star;
  const Vector& mu_star = rep.solution.mu_star;
  CHECK(rep.ce_nu_hat ==
        doctest::Approx(expected_utility_log(p.market, rep.pi_hat, nu, -0.5).certainty_equivalent()).epsilon(1e-13));
  CHECK(rep.ce_nu_star ==
        doctest::Approx(expected_utility_log(p.market, pi_star, nu, -0.5).certainty_equivalent()).epsilon(1e-13));
  CHECK(rep.ce_mustar_hat ==
        doctest::Approx(expected_utility_log(p.market, rep.pi_hat, mu_star, -0.5).certainty_equivalent())
            .epsilon(1e-13));
  CHECK(rep.ce_mustar_star == doctest::Approx(rep.solution.ce).epsilon(1e-13));
  CHECK(rep.coa == doctest::Approx(rep.ce_nu_hat - rep.ce_nu_star).epsilon(1e-14));
  CHECK(rep.rdr == doctest::Approx(rep.ce_mustar_star - rep.ce_mustar_hat).epsilon(1e-14));
}

TEST_CASE("expected-utility variant") {
  const auto p = rm_test::example8_problem(0.5, 0.3);
  const RobustnessReport rep = compute_coa_rdr(p, MetricScale::ExpectedUtility);
  CHECK(rep.scale == MetricScale::ExpectedUtility);
  CHECK(rep.coa >= 0.0);
  CHECK(rep.rdr >= 0.0);
}

TEST_CASE("reward for robustness vanishes at large radius") {
  for (double gamma : {-1.0, 0.0, 0.5}) {
    const RobustnessReport rep = compute_coa_rdr(rm_test::example8_problem(gamma, 1e4));
    CHECK(rep.rdr <= 1e-6);
    CHECK(rep.rdr >= 0.0);
  }
}

TEST_CASE("constraint level comparison") {
  const auto p = rm_test::example8_problem(0.5, 10.0);
  const ConstraintComparison cmp = compare_constraint_levels(p, 1.5);
  CHECK(cmp.value_h_prime <= cmp.value_h);
  CHECK(cmp.h_prime_not_better);
  CHECK(cmp.c_dot_mu_star < 0.0);

  const ConstraintComparison same = compare_constraint_levels(p, 1.0);
  CHECK(same.value_h == same.value_h_prime);
  CHECK_THROWS_AS(compare_constraint_levels(p, 0.5), Error);
}

TEST_CASE("c^T mu* decreases without bound along the radius") {
  const auto p = rm_test::example8_problem(0.5, 1.0);
  const auto grid = geometric_grid(1.0, 1e6, 13);
  const ConstraintScan scan = scan_constraint_levels(p, 1.5, grid);
  REQUIRE(scan.rows.size() == grid.size());
  for (std::size_t i = scan.rows.size() - 6; i < scan.rows.size(); ++i) {
    CHECK(scan.rows[i].c_dot_mu_star < scan.rows[i - 1].c_dot_mu_star);
  }
  CHECK(scan.rows.back().c_dot_mu_star < -1e5);
  REQUIRE(scan.observed_threshold.has_value());
  CHECK(*scan.observed_threshold <= 10.0);
}
