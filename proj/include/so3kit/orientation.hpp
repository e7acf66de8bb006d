#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cmath>
#include <stdexcept>

namespace so3kit {

template <typename T>
using Vec3T = Eigen::Matrix<T, 3, 1>;
template <typename T>
using Mat3T = Eigen::Matrix<T, 3, 3>;

using Vec3 = Vec3T<double>;
using Mat3 = Mat3T<double>;

/// Tangent-space coordinates of a relative orientation: the passive rotation
/// vector (rad). Outputs of log() lie in the open ball of radius pi.
using RotationVector = Vec3;

/// Angle norm below which exp/log (and the matrix kernels in calculus.hpp)
/// switch to their Taylor branches.
inline constexpr double kSmallAngle = 1e-4;

/// Largest |norm - 1| accepted by the Orientation constructor. Anything worse
/// is treated as corrupted input; smaller drift is renormalized away.
inline constexpr double kMaxNormDrift = 1e-6;

/// Skew-symmetric matrix of v, i.e. hat(v) * r == v.cross(r) for all r.
template <typename T>
Mat3T<T> hat(const Vec3T<T>& v) {
  Mat3T<T> m;
  m << T(0), -v.z(), v.y(),
       v.z(), T(0), -v.x(),
       -v.y(), v.x(), T(0);
  return m;
}

/// Relative orientation between two coordinate systems, stored as a Hamilton
/// unit quaternion (q0, qv) = (real part, imaginary part).
///
/// (q0, qv) and (-q0, -qv) describe the same rotation; storage is not
/// canonicalized, equality is always distance on SO(3) (see
/// orientation_distance), never component-wise.
template <typename T>
class Orientation {
 public:
  Orientation() : q0_(T(1)), qv_(Vec3T<T>::Zero()) {}

  /// Builds from quaternion components. Throws std::invalid_argument if the
  /// norm deviates from 1 by more than kMaxNormDrift (or is non-finite);
  /// smaller drift is renormalized so the unit-norm invariant holds exactly.
  Orientation(T q0, const Vec3T<T>& qv) : q0_(q0), qv_(qv) { normalize(); }

  static Orientation identity() { return Orientation(); }

  T q0() const { return q0_; }
  const Vec3T<T>& qv() const { return qv_; }

 private:
  void normalize() {
    const T n = std::sqrt(q0_ * q0_ + qv_.squaredNorm());
    if (!(std::abs(n - T(1)) <= T(kMaxNormDrift))) {
      throw std::invalid_argument("Orientation: quaternion norm deviates from 1 beyond tolerance");
    }
    q0_ /= n;
    qv_ /= n;
  }

  T q0_;
  Vec3T<T> qv_;
};

using Orientationd = Orientation<double>;

/// Maps coordinates through the orientation: r expressed in the target frame.
template <typename T>
Vec3T<T> rotate(const Orientation<T>& q, const Vec3T<T>& r) {
  const T q0 = q.q0();
  const Vec3T<T>& qv = q.qv();
  return (T(2) * q0 * q0 - T(1)) * r + T(2) * q0 * qv.cross(r) + T(2) * qv * qv.dot(r);
}

/// Rotation matrix C with C * r == rotate(q, r).
template <typename T>
Mat3T<T> rotation_matrix(const Orientation<T>& q) {
  const T q0 = q.q0();
  const Vec3T<T>& qv = q.qv();
  return (T(2) * q0 * q0 - T(1)) * Mat3T<T>::Identity() + T(2) * q0 * hat(qv) +
         T(2) * qv * qv.transpose();
}

/// Concatenation q1 o q2 (apply q2 first, then q1).
template <typename T>
Orientation<T> compose(const Orientation<T>& q1, const Orientation<T>& q2) {
  const T a0 = q1.q0();
  const T b0 = q2.q0();
  const Vec3T<T>& av = q1.qv();
  const Vec3T<T>& bv = q2.qv();
#ifdef SO3KIT_FAULT_INJECT_COMPOSE
  // Test-only mutation hook: flipped cross term, the consistency checks must
  // catch this.
  const Vec3T<T> cross = -av.cross(bv);
#else
  const Vec3T<T> cross = av.cross(bv);
#endif
  return Orientation<T>(a0 * b0 - av.dot(bv), a0 * bv + b0 * av + cross);
}

template <typename T>
Orientation<T> inverse(const Orientation<T>& q) {
  return Orientation<T>(q.q0(), -q.qv());
}

/// Exponential map: rotation vector -> orientation.
template <typename T>
Orientation<T> exp(const Vec3T<T>& phi) {
  const T angle = phi.norm();
  if (angle < T(kSmallAngle)) {
    return Orientation<T>(T(1), phi / T(2));
  }
  const T half = angle / T(2);
  return Orientation<T>(std::cos(half), (std::sin(half) / angle) * phi);
}

/// Logarithm: orientation -> rotation vector with norm <= pi.
///
/// The double cover is resolved toward the representative with q0 >= 0, so the
/// result lies in the closed ball of radius pi. For exactly-180-degree
/// rotations both hemispheres are valid; the one whose first nonzero component
/// is positive is returned.
template <typename T>
Vec3T<T> log(const Orientation<T>& q) {
  T q0 = q.q0();
  Vec3T<T> qv = q.qv();
  if (q0 < T(0)) {
    q0 = -q0;
    qv = -qv;
  }
  const T qn = qv.norm();
  if (qn < T(kSmallAngle)) {
    return T(2) * qv;
  }
  Vec3T<T> out = (T(2) * std::atan2(qn, q0) / qn) * qv;
  if (q0 == T(0)) {
    for (int i = 0; i < 3; ++i) {
      if (out[i] > T(0)) break;
      if (out[i] < T(0)) {
        out = -out;
        break;
      }
    }
  }
  return out;
}

/// q boxplus phi = exp(phi) o q.
template <typename T>
Orientation<T> boxplus(const Orientation<T>& q, const Vec3T<T>& phi) {
  return compose(exp(phi), q);
}

/// q1 boxminus q2 = log(q1 o q2^-1).
template <typename T>
Vec3T<T> boxminus(const Orientation<T>& q1, const Orientation<T>& q2) {
  return log(compose(q1, inverse(q2)));
}

/// Geodesic distance on SO(3), in [0, pi]. Zero iff equal as rotations
/// (insensitive to the quaternion sign).
template <typename T>
T orientation_distance(const Orientation<T>& q1, const Orientation<T>& q2) {
  return boxminus(q1, q2).norm();
}

}  // namespace so3kit
