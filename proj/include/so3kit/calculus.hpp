#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "so3kit/orientation.hpp"

namespace so3kit {

/// Rodriguez' formula: the rotation matrix of exp(phi), computed directly from
/// the rotation vector. Below kSmallAngle a second-order Taylor branch is used
/// so both branches agree to well under 1e-10 at the switch.
template <typename T>
Mat3T<T> rodriguez(const Vec3T<T>& phi) {
  const Mat3T<T> px = hat(phi);
  const T angle = phi.norm();
  if (angle < T(kSmallAngle)) {
    return Mat3T<T>::Identity() + px + T(0.5) * px * px;
  }
  return Mat3T<T>::Identity() + (std::sin(angle) / angle) * px +
         ((T(1) - std::cos(angle)) / (angle * angle)) * px * px;
}

/// Jacobian of the exponential map. Satisfies gamma(phi) * phi == phi and
/// gamma(phi) * hat(phi) == rodriguez(phi) - I.
template <typename T>
Mat3T<T> gamma(const Vec3T<T>& phi) {
  const Mat3T<T> px = hat(phi);
  const T angle = phi.norm();
  if (angle < T(kSmallAngle)) {
    return Mat3T<T>::Identity() + T(0.5) * px + (T(1) / T(6)) * px * px;
  }
  const T a2 = angle * angle;
  return Mat3T<T>::Identity() + ((T(1) - std::cos(angle)) / a2) * px +
         ((angle - std::sin(angle)) / (a2 * angle)) * px * px;
}

/// Inverse of gamma, valid on ||phi|| < pi (the codomain of log). Computed by
/// a direct 3x3 solve. Throws std::domain_error outside the domain.
template <typename T>
Mat3T<T> gamma_inverse(const Vec3T<T>& phi) {
  if (!(phi.norm() < T(M_PI))) {
    throw std::domain_error("gamma_inverse: ||phi|| must be smaller than pi");
  }
  return gamma(phi).partialPivLu().solve(Mat3T<T>::Identity());
}

enum class DiffScheme { forward, central };

struct DiffConfig {
  double step = 1e-6;
  DiffScheme scheme = DiffScheme::central;
};

namespace detail {
inline double checked_step(const DiffConfig& cfg) {
  if (!(cfg.step > 0.0)) throw std::invalid_argument("DiffConfig: step must be positive");
  return cfg.step;
}
}  // namespace detail

/// Derivative of f: R -> SO(3) at x, realized as the boxminus difference
/// quotient. Central scheme: (f(x+e) boxminus f(x-e)) / 2e.
template <typename F>
RotationVector numeric_diff_to_manifold(F&& f, double x, const DiffConfig& cfg = {}) {
  const double e = detail::checked_step(cfg);
  if (cfg.scheme == DiffScheme::central) {
    return boxminus(f(x + e), f(x - e)) / (2.0 * e);
  }
  return boxminus(f(x + e), f(x)) / e;
}

/// Derivative of f: SO(3) -> R^m at q. Column i is the directional difference
/// quotient along boxplus(q, e * e_i).
template <typename F>
Eigen::Matrix<double, Eigen::Dynamic, 3> numeric_diff_from_manifold(F&& f, const Orientationd& q,
                                                                    const DiffConfig& cfg = {}) {
  const double e = detail::checked_step(cfg);
  const Eigen::VectorXd y0 = f(q);
  Eigen::Matrix<double, Eigen::Dynamic, 3> jac(y0.rows(), 3);
  for (int i = 0; i < 3; ++i) {
    const Vec3 dir = e * Vec3::Unit(i);
    if (cfg.scheme == DiffScheme::central) {
      jac.col(i) = (f(boxplus(q, dir)) - f(boxplus(q, Vec3(-dir)))) / (2.0 * e);
    } else {
      jac.col(i) = (f(boxplus(q, dir)) - y0) / e;
    }
  }
  return jac;
}

/// Derivative of f: SO(3) -> SO(3): boxplus perturbation in, boxminus
/// difference out.
template <typename F>
Mat3 numeric_diff_manifold_to_manifold(F&& f, const Orientationd& q, const DiffConfig& cfg = {}) {
  const double e = detail::checked_step(cfg);
  Mat3 jac;
  const Orientationd y0 = f(q);
  for (int i = 0; i < 3; ++i) {
    const Vec3 dir = e * Vec3::Unit(i);
    if (cfg.scheme == DiffScheme::central) {
      jac.col(i) = boxminus(f(boxplus(q, dir)), f(boxplus(q, Vec3(-dir)))) / (2.0 * e);
    } else {
      jac.col(i) = boxminus(f(boxplus(q, dir)), y0) / e;
    }
  }
  return jac;
}

/// Derivative of f: R^3 -> SO(3).
template <typename F>
Mat3 numeric_diff_vector_to_manifold(F&& f, const Vec3& x, const DiffConfig& cfg = {}) {
  const double e = detail::checked_step(cfg);
  Mat3 jac;
  const Orientationd y0 = f(x);
  for (int i = 0; i < 3; ++i) {
    const Vec3 dir = e * Vec3::Unit(i);
    if (cfg.scheme == DiffScheme::central) {
      jac.col(i) = boxminus(f(x + dir), f(x - dir)) / (2.0 * e);
    } else {
      jac.col(i) = boxminus(f(x + dir), y0) / e;
    }
  }
  return jac;
}

// Analytic derivative catalog. All Jacobians are with respect to the boxplus/
// boxminus difference quotients above; the time derivative of an orientation
// trajectory has no free matrix to tabulate (it equals minus the angular
// velocity of the moving frame) and is exercised against synthesized
// trajectories in the check suite.

/// d rotate(q, r) / d r = C(q)
inline Mat3 d_rotate_d_vector(const Orientationd& q) { return rotation_matrix(q); }

/// d rotate(q, r) / d q = -hat(rotate(q, r))
inline Mat3 d_rotate_d_orientation(const Orientationd& q, const Vec3& r) {
  return -hat(Vec3(rotate(q, r)));
}

/// d inverse(q) / d q = -C(q)^T
inline Mat3 d_inverse(const Orientationd& q) { return -rotation_matrix(q).transpose(); }

/// d compose(q1, q2) / d q1 = I
inline Mat3 d_compose_left(const Orientationd& /*q1*/, const Orientationd& /*q2*/) {
  return Mat3::Identity();
}

/// d compose(q1, q2) / d q2 = C(q1)
inline Mat3 d_compose_right(const Orientationd& q1) { return rotation_matrix(q1); }

/// d exp(phi) / d phi = gamma(phi)
inline Mat3 d_exp(const RotationVector& phi) { return gamma(phi); }

/// d log(q) / d q = gamma_inverse(log(q))
inline Mat3 d_log(const Orientationd& q) { return gamma_inverse(Vec3(log(q))); }

/// Distance between exp(q(v)) and q o exp(v) o q^-1; zero up to roundoff for
/// every unit-norm q and every v.
inline double adjoint_check(const Orientationd& q, const RotationVector& v) {
  const Orientationd lhs = exp(Vec3(rotate(q, v)));
  const Orientationd rhs = compose(compose(q, exp(v)), inverse(q));
  return orientation_distance(lhs, rhs);
}

/// Residual ||log(exp(e*phi1) o exp(e*phi2)) / e - (phi1 + phi2)|| for each
/// step size. The residuals decay at first order in e.
inline std::vector<double> log_additivity_limit(const RotationVector& phi1,
                                                const RotationVector& phi2,
                                                const std::vector<double>& eps_sequence) {
  std::vector<double> residuals;
  residuals.reserve(eps_sequence.size());
  for (const double e : eps_sequence) {
    const Vec3 lhs = log(compose(exp(Vec3(e * phi1)), exp(Vec3(e * phi2)))) / e;
    residuals.push_back((lhs - (phi1 + phi2)).norm());
  }
  return residuals;
}

}  // namespace so3kit
