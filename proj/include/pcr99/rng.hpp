#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace pcr99 {

/// SplitMix64 finalizer. Used to derive independent stream seeds from a base
/// seed and loop indices so that adding trials never perturbs earlier ones.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = mix64(base + 1);
  s = mix64(s ^ (a * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL));
  s = mix64(s ^ (b * 0xd1342543de82ef95ULL + 0x9e3779b97f4a7c15ULL));
  return s;
}

/// Deterministic random source. The engine (mt19937_64) is pinned by the
/// standard and all distributions are implemented here explicitly, so a seed
/// produces the same stream on every platform. The library-provided
/// distributions are deliberately avoided: their output is
/// implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, m). Modulo bias is ~m/2^64, irrelevant here.
  std::uint64_t next_below(std::uint64_t m) { return next_u64() % m; }

  /// Standard normal via Box-Muller; pairs are cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  Eigen::Vector3d normal3(double sigma) {
    return {sigma * normal(), sigma * normal(), sigma * normal()};
  }

  Eigen::Vector3d uniform_in_unit_cube() { return {uniform01(), uniform01(), uniform01()}; }

  /// Uniform over the rotation group (normalized 4D Gaussian quaternion).
  Eigen::Quaterniond rotation() {
    while (true) {
      Eigen::Quaterniond q(normal(), normal(), normal(), normal());
      const double n = q.norm();
      if (n > 1e-12) {
        q.coeffs() /= n;
        return q;
      }
    }
  }

  /// Uniform inside the ball of the given radius (rejection from the cube).
  Eigen::Vector3d uniform_in_ball(double radius) {
    while (true) {
      const Eigen::Vector3d p{uniform(-1.0, 1.0), uniform(-1.0, 1.0), uniform(-1.0, 1.0)};
      if (p.squaredNorm() <= 1.0) return radius * p;
    }
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace pcr99
