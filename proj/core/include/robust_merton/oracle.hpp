#pragma once

// Independent verification routes that do not share code with the solver:
// a brute-force minimiser over the sphere and an exact Monte Carlo sampler
// of terminal wealth for constant strategies.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "robust_merton/market.hpp"

namespace robust_merton {

struct BruteForceResult {
  Vector rho_best;
  double g_best = 0.0;
};

/// Minimises objective over the sphere |rho| = kappa: n_grid uniform samples,
/// then n_refine rounds of shrinking-step coordinate search in the tangent
/// space, each candidate projected back onto the sphere. Deterministic in seed.
/// Throws Error(InvalidArgument) for kappa <= 0 or n_grid < 1000.
BruteForceResult brute_force_worst_case(const std::function<double(const Vector&)>& objective,
                                        int d, double kappa, int n_grid, int n_refine,
                                        std::uint64_t seed);

/// Paths per random sub-stream; block b of the output uses stream index b.
inline constexpr int kMcBlockSize = 16384;

/// Exact draws of X_T for the constant strategy pi under drift mu:
///   log X_T = log x0 + (r + pi^T(mu - r 1) - |sigma^T pi|^2 / 2) T + sqrt(T) <sigma^T pi, Z>.
/// Output is identical for any n_workers (0 picks the hardware concurrency).
std::vector<double> simulate_terminal_wealth(const MarketModel& market, const Vector& pi,
                                             const Vector& mu, int n_paths, std::uint64_t seed,
                                             int n_workers = 0);

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(n_paths)
  int n_paths = 0;
  std::uint64_t seed = 0;
};

/// Pathwise U_gamma, mean and standard error. Throws Error(InvalidSample) on
/// non-positive or non-finite wealth and Error(InvalidArgument) on empty input.
McEstimate mc_expected_utility(std::span<const double> samples, double gamma, std::uint64_t seed = 0);

McEstimate mc_expected_utility(const MarketModel& market, const Vector& pi, const Vector& mu,
                               double gamma, int n_paths, std::uint64_t seed, int n_workers = 0);

}  // namespace robust_merton
