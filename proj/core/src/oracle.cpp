#include "robust_merton/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "robust_merton/random.hpp"

namespace robust_merton {

BruteForceResult brute_force_worst_case(const std::function<double(const Vector&)>& objective,
                                        int d, double kappa, int n_grid, int n_refine,
                                        std::uint64_t seed) {
  if (!(kappa > 0.0)) throw Error(ErrorKind::InvalidArgument, "brute force needs kappa > 0");
  if (n_grid < 1000) throw Error(ErrorKind::InvalidArgument, "brute force needs n_grid >= 1000");
  if (d < 1) throw Error(ErrorKind::InvalidDimension, "brute force needs d >= 1");

  RandomStream rng(seed);
  BruteForceResult best;
  best.g_best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n_grid; ++k) {
    Vector rho = uniform_on_sphere(d, kappa, rng);
    const double g = objective(rho);
    if (g < best.g_best) {
      best.g_best = g;
      best.rho_best = std::move(rho);
    }
  }

  double step = 0.25 * kappa;
  for (int iter = 0; iter < n_refine && step > 1e-16 * kappa; ++iter) {
    bool improved = false;
    for (int j = 0; j < d; ++j) {
      const Vector radial = best.rho_best / kappa;
      Vector tangent = -radial(j) * radial;
      tangent(j) += 1.0;
      const double norm = tangent.norm();
      if (norm < 1e-12) continue;
      tangent /= norm;
      for (double sign : {1.0, -1.0}) {
        Vector candidate = best.rho_best + sign * step * tangent;
        candidate *= kappa / candidate.norm();
        const double g = objective(candidate);
        if (g < best.g_best) {
          best.g_best = g;
          best.rho_best = std::move(candidate);
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return best;
}

std::vector<double> simulate_terminal_wealth(const MarketModel& market, const Vector& pi,
                                             const Vector& mu, int n_paths, std::uint64_t seed,
                                             int n_workers) {
  const int d = market.d();
  if (pi.size() != d || mu.size() != d) {
    throw Error(ErrorKind::InvalidDimension, "pi and mu must have dimension " + std::to_string(d));
  }
  if (n_paths < 1) throw Error(ErrorKind::InvalidArgument, "n_paths must be at least 1");

  const Vector exposure = market.sigma().transpose() * pi;  // sigma^T pi
  const double vol_sq = exposure.squaredNorm();
  const bool zero_strategy = (pi.array() == 0.0).all();
  if (vol_sq == 0.0 && !zero_strategy) {
    throw Error(ErrorKind::InternalConsistency, "sigma^T pi vanishes for a non-zero pi");
  }

  const double T = market.horizon();
  const double r = market.r();
  const double log_drift = std::log(market.x0()) + (r + pi.dot(mu) - r * pi.sum() - 0.5 * vol_sq) * T;
  const double sqrt_t = std::sqrt(T);
  const auto m = market.m();

  std::vector<double> out(static_cast<std::size_t>(n_paths));
  const int n_blocks = (n_paths + kMcBlockSize - 1) / kMcBlockSize;

  auto run_block = [&](int block) {
    RandomStream rng(seed, static_cast<std::uint64_t>(block));
    const int begin = block * kMcBlockSize;
    const int end = std::min(n_paths, begin + kMcBlockSize);
    for (int p = begin; p < end; ++p) {
      double shock = 0.0;
      if (!zero_strategy) {
        for (Eigen::Index k = 0; k < m; ++k) shock += exposure(k) * rng.normal();
      }
      out[static_cast<std::size_t>(p)] = std::exp(log_drift + sqrt_t * shock);
    }
  };

  int workers = n_workers > 0 ? n_workers : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, n_blocks);
  if (workers == 1) {
    for (int b = 0; b < n_blocks; ++b) run_block(b);
    return out;
  }
  std::vector<std::jthread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (int b = w; b < n_blocks; b += workers) run_block(b);
    });
  }
  pool.clear();  // joins
  return out;
}

McEstimate mc_expected_utility(std::span<const double> samples, double gamma, std::uint64_t seed) {
  require_gamma(gamma);
  if (samples.empty()) throw Error(ErrorKind::InvalidArgument, "no wealth samples");

  auto utility = [gamma](double x) {
    return gamma == 0.0 ? std::log(x) : std::pow(x, gamma) / gamma;
  };

  // Neumaier-compensated mean, then a second pass for the variance.
  double sum = 0.0;
  double comp = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double x = samples[i];
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw Error(ErrorKind::InvalidSample, "wealth sample " + std::to_string(i) + " is not positive");
    }
    const double u = utility(x);
    const double t = sum + u;
    comp += std::abs(sum) >= std::abs(u) ? (sum - t) + u : (u - t) + sum;
    sum = t;
  }
  const double n = static_cast<double>(samples.size());
  const double mean = (sum + comp) / n;

  double ss = 0.0;
  for (double x : samples) {
    const double dev = utility(x) - mean;
    ss += dev * dev;
  }
  McEstimate est;
  est.mean = mean;
  est.n_paths = static_cast<int>(samples.size());
  est.seed = seed;
  est.std_error = samples.size() > 1 ? std::sqrt(ss / (n - 1.0)) / std::sqrt(n) : 0.0;
  return est;
}

McEstimate mc_expected_utility(const MarketModel& market, const Vector& pi, const Vector& mu,
                               double gamma, int n_paths, std::uint64_t seed, int n_workers) {
  const auto samples = simulate_terminal_wealth(market, pi, mu, n_paths, seed, n_workers);
  return mc_expected_utility(samples, gamma, seed);
}

}  // namespace robust_merton
