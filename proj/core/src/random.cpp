#include "robust_merton/random.hpp"

#include <cmath>

namespace robust_merton {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream)
    : engine_(splitmix64(splitmix64(seed) ^ (stream * 0xD1B54A32D192ED03ULL + 1))) {}

double RandomStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform_open_low() {
  return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
}

double RandomStream::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_normal_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  cached_normal_ = v * factor;
  has_cached_ = true;
  return u * factor;
}

Eigen::VectorXd RandomStream::normal_vector(Eigen::Index n) {
  Eigen::VectorXd z(n);
  for (Eigen::Index i = 0; i < n; ++i) z(i) = normal();
  return z;
}

double RandomStream::exponential() { return -std::log(uniform_open_low()); }

Eigen::VectorXd uniform_on_sphere(Eigen::Index n, double radius, RandomStream& rng) {
  Eigen::VectorXd z;
  double norm = 0.0;
  do {
    z = rng.normal_vector(n);
    norm = z.norm();
  } while (norm == 0.0);
  return (radius / norm) * z;
}

Eigen::VectorXd uniform_in_ball(Eigen::Index n, double radius, RandomStream& rng) {
  const double u = rng.uniform();
  return uniform_on_sphere(n, radius * std::pow(u, 1.0 / static_cast<double>(n)), rng);
}

}  // namespace robust_merton
