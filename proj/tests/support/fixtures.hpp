#pragma once

// Instances and brute-force references shared by the unit and acceptance tests.

#include <cmath>
#include <numbers>

#include <Eigen/Cholesky>

#include <robust_merton/robust_merton.hpp>

namespace rm_test {

using robust_merton::Matrix;
using robust_merton::Vector;

// Lower-triangular 8x8 volatility of the 8-asset reference market.
inline Matrix example8_sigma() {
  Matrix s(8, 8);
  s << 0.3, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
       0.2, 0.3, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
       0.0, 0.2, 0.3, 0.0, 0.0, 0.0, 0.0, 0.0,
       0.3, 0.2, 0.0, 0.4, 0.0, 0.0, 0.0, 0.0,
       0.2, 0.3, 0.0, 0.1, 0.3, 0.0, 0.0, 0.0,
       0.1, 0.1, 0.1, 0.1, 0.2, 0.2, 0.0, 0.0,
       0.2, 0.1, 0.2, 0.1, 0.2, 0.2, 0.4, 0.0,
       0.1, 0.0, 0.0, 0.2, 0.1, 0.1, 0.2, 0.4;
  return s;
}

inline robust_merton::MarketModel example8_market() {
  return robust_merton::MarketModel(example8_sigma(), 0.0, 1.0, 1.0);
}

inline robust_merton::RobustProblem example8_problem(double gamma, double kappa, double h = 1.0) {
  return robust_merton::prepare_problem(example8_market(), robust_merton::InvestorProfile(gamma, h),
                                        robust_merton::UncertaintySet(Vector::Constant(8, 0.3),
                                                                      Matrix::Identity(8, 8), kappa));
}

inline robust_merton::RobustProblem example8_problem_with_shape(double gamma, double kappa,
                                                                const Matrix& shape) {
  return robust_merton::prepare_problem(example8_market(), robust_merton::InvestorProfile(gamma, 1.0),
                                        robust_merton::UncertaintySet(Vector::Constant(8, 0.3), shape, kappa));
}

// d = 2, sigma = I, Gamma = I, nu = 0.3 (1, 1), h = 1, r = 0, T = 1, x0 = 1.
inline robust_merton::RobustProblem symmetric_problem(double kappa, double gamma = 0.0) {
  return robust_merton::prepare_problem(
      robust_merton::MarketModel(Matrix::Identity(2, 2), 0.0, 1.0, 1.0),
      robust_merton::InvestorProfile(gamma, 1.0),
      robust_merton::UncertaintySet(Vector::Constant(2, 0.3), Matrix::Identity(2, 2), kappa));
}

// Full-rank d x m volatility: Gaussian entries plus a dominant diagonal block.
inline Matrix random_sigma(int d, int m, robust_merton::RandomStream& rng) {
  Matrix s(d, m);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < m; ++j) s(i, j) = 0.15 * rng.normal();
  }
  for (int i = 0; i < d; ++i) s(i, i) += 0.25 + 0.1 * rng.uniform();
  return s;
}

inline Matrix random_spd(int d, robust_merton::RandomStream& rng) {
  Matrix b(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) b(i, j) = 0.5 * rng.normal();
  }
  return b * b.transpose() + 0.2 * Matrix::Identity(d, d);
}

struct RandomInstanceOptions {
  int d = 3;
  int m = 3;
  double gamma = 0.0;
  double kappa_lo = 0.05;
  double kappa_hi = 1.0;
};

inline robust_merton::RobustProblem random_problem(const RandomInstanceOptions& opt,
                                                   robust_merton::RandomStream& rng) {
  const Matrix sigma = random_sigma(opt.d, opt.m, rng);
  const double r = 0.03 * rng.uniform();
  const double horizon = 0.5 + 1.5 * rng.uniform();
  Vector nu(opt.d);
  for (int i = 0; i < opt.d; ++i) nu(i) = -0.1 + 0.5 * rng.uniform();
  const Matrix shape = random_spd(opt.d, rng);
  const double kappa = opt.kappa_lo + (opt.kappa_hi - opt.kappa_lo) * rng.uniform();
  const double h = 0.5 + rng.uniform();
  return robust_merton::prepare_problem(robust_merton::MarketModel(sigma, r, horizon, 1.0),
                                        robust_merton::InvestorProfile(opt.gamma, h),
                                        robust_merton::UncertaintySet(nu, shape, kappa));
}

// Worst drift for d = 2 by scanning the boundary angle of the ellipse and
// refining with golden-section search on the optimal value given mu. Shares
// nothing with the spectral solver beyond the value formula.
struct AngleScanResult {
  Vector mu;
  double value = 0.0;
};

inline AngleScanResult angle_scan_worst_drift(const robust_merton::RobustProblem& p, int n_scan = 20000) {
  const auto& u = p.uncertainty;
  const Matrix tau = u.shape().llt().matrixL();
  auto drift = [&](double t) -> Vector {
    Vector dir(2);
    dir << std::cos(t), std::sin(t);
    return u.nu() + u.kappa() * tau * dir;
  };
  auto log_value = [&](double t) {
    // Monotone in the value for either sign of gamma.
    const auto lv = robust_merton::optimal_value_given_mu_log(p.market, p.profile, drift(t));
    return p.profile.gamma() == 0.0 ? lv.value() : lv.exponent * (p.profile.gamma() > 0 ? 1.0 : -1.0);
  };
  const double two_pi = 2.0 * std::numbers::pi;
  double best_t = 0.0;
  double best = log_value(0.0);
  for (int k = 1; k < n_scan; ++k) {
    const double t = two_pi * k / n_scan;
    const double v = log_value(t);
    if (v < best) {
      best = v;
      best_t = t;
    }
  }
  double a = best_t - two_pi / n_scan;
  double b = best_t + two_pi / n_scan;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
    const double x1 = b - phi * (b - a);
    const double x2 = a + phi * (b - a);
    if (log_value(x1) < log_value(x2)) {
      b = x2;
    } else {
      a = x1;
    }
  }
  const double t = 0.5 * (a + b);
  return {drift(t), robust_merton::optimal_value_given_mu(p.market, p.profile, drift(t))};
}

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace rm_test
