#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include <Eigen/Core>

namespace robust_merton {

/// Name and version of the random stream construction. Bumped whenever the
/// derivation below changes, since golden outputs depend on it.
inline constexpr std::string_view kRngAlgorithm = "mt19937_64/splitmix64-seed/polar-normal v1";

/// Reproducible random stream.
///
/// Engine: std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Seeding: the engine is seeded with splitmix64 applied to
/// (seed, stream index), so sub-streams for parallel workers are derived
/// from a single user seed. Uniforms take the top 53 bits; normals use the
/// Marsaglia polar method. No std::*_distribution is involved because
/// their algorithms differ between standard library implementations.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0);

  /// Uniform on [0, 1).
  double uniform();
  /// Uniform on (0, 1].
  double uniform_open_low();
  double normal();
  Eigen::VectorXd normal_vector(Eigen::Index n);
  /// Exponential with rate 1.
  double exponential();

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Uniform point on the sphere of the given radius in R^n.
Eigen::VectorXd uniform_on_sphere(Eigen::Index n, double radius, RandomStream& rng);

/// Uniform point in the closed ball of the given radius in R^n.
Eigen::VectorXd uniform_in_ball(Eigen::Index n, double radius, RandomStream& rng);

}  // namespace robust_merton
