#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <random>

#include "so3kit/orientation.hpp"

namespace so3kit {

/// Seedable random number generator with fully specified output.
///
/// Engine: std::mt19937_64 (the 64-bit Mersenne Twister, whose sequence is
/// pinned by the C++ standard). Uniform doubles take the top 53 bits of one
/// engine draw: u = (x >> 11) * 2^-53 in [0, 1). Gaussians use the Box-Muller
/// transform of two uniforms (u1 redrawn while zero), with the second variate
/// cached, instead of std::normal_distribution, which is not portable across
/// standard libraries. Identical seeds therefore give identical streams on
/// every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 == 0.0) u1 = uniform();
    const double u2 = uniform();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    spare_ = mag * std::sin(2.0 * M_PI * u2);
    has_spare_ = true;
    return mag * std::cos(2.0 * M_PI * u2);
  }

  Vec3 gaussian3() { return Vec3(gaussian(), gaussian(), gaussian()); }

  /// Orientation drawn uniformly on SO(3) (normalized 4-dim Gaussian).
  Orientationd orientation() {
    double q0 = gaussian();
    Vec3 qv = gaussian3();
    double n = std::sqrt(q0 * q0 + qv.squaredNorm());
    while (n < 1e-12) {
      q0 = gaussian();
      qv = gaussian3();
      n = std::sqrt(q0 * q0 + qv.squaredNorm());
    }
    return Orientationd(q0 / n, Vec3(qv / n));
  }

  /// Vector drawn uniformly in the ball of the given radius.
  Vec3 ball(double radius) {
    while (true) {
      const Vec3 v(2.0 * uniform() - 1.0, 2.0 * uniform() - 1.0, 2.0 * uniform() - 1.0);
      if (v.squaredNorm() <= 1.0) return radius * v;
    }
  }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// SplitMix64 step, used to derive independent stream seeds from a base seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Symmetric PSD square root, for drawing correlated Gaussian vectors.
inline Mat3 psd_sqrt(const Mat3& cov) {
  const Eigen::SelfAdjointEigenSolver<Mat3> eig(cov);
  return eig.eigenvectors() *
         eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
         eig.eigenvectors().transpose();
}

}  // namespace so3kit
