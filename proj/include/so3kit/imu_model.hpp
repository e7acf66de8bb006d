#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <utility>

#include "so3kit/calculus.hpp"
#include "so3kit/orientation.hpp"

namespace so3kit {

// Error-state layout: [dr, dv, dphi, db_f, db_w], 3 each.
inline constexpr int kErrorDim = 15;
inline constexpr int kIdxR = 0;
inline constexpr int kIdxV = 3;
inline constexpr int kIdxPhi = 6;
inline constexpr int kIdxBf = 9;
inline constexpr int kIdxBw = 12;

using Vec15 = Eigen::Matrix<double, kErrorDim, 1>;
using Mat15 = Eigen::Matrix<double, kErrorDim, kErrorDim>;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat6x15 = Eigen::Matrix<double, 6, kErrorDim>;

/// IMU-driven navigation state.
///
/// r    position of the body frame in the inertial frame (m)
/// v    velocity, expressed in the body frame (m/s)
/// q    orientation mapping body coordinates to inertial coordinates
/// b_f  accelerometer bias (m/s^2), b_w gyroscope bias (rad/s)
struct NavState {
  Vec3 r = Vec3::Zero();
  Vec3 v = Vec3::Zero();
  Orientationd q;
  Vec3 b_f = Vec3::Zero();
  Vec3 b_w = Vec3::Zero();
};

/// One IMU reading: proper acceleration f (m/s^2) and angular velocity w
/// (rad/s), both in the body frame.
struct ImuSample {
  double t = 0.0;
  Vec3 f = Vec3::Zero();
  Vec3 w = Vec3::Zero();
};

/// Position plus orientation measurement.
struct PoseMeasurement {
  double t = 0.0;
  Vec3 r = Vec3::Zero();
  Orientationd q;
};

/// Continuous-time white-noise densities for the process model (R_v, R_f,
/// R_w, R_bf, R_bw) and discrete covariances for the pose measurement
/// (R_p, R_phi). All symmetric PSD.
struct NoiseDensities {
  Mat3 R_v = Mat3::Zero();
  Mat3 R_f = Mat3::Zero();
  Mat3 R_w = Mat3::Zero();
  Mat3 R_bf = Mat3::Zero();
  Mat3 R_bw = Mat3::Zero();
  Mat3 R_p = Mat3::Zero();
  Mat3 R_phi = Mat3::Zero();

  static NoiseDensities isotropic(double r_v, double r_f, double r_w, double r_bf, double r_bw,
                                  double r_p, double r_phi) {
    NoiseDensities n;
    n.R_v = r_v * Mat3::Identity();
    n.R_f = r_f * Mat3::Identity();
    n.R_w = r_w * Mat3::Identity();
    n.R_bf = r_bf * Mat3::Identity();
    n.R_bw = r_bw * Mat3::Identity();
    n.R_p = r_p * Mat3::Identity();
    n.R_phi = r_phi * Mat3::Identity();
    return n;
  }
};

/// Bias-corrected specific force and angular velocity (noise terms are zero
/// at the mean).
inline std::pair<Vec3, Vec3> correct_imu(const ImuSample& sample, const NavState& state) {
  return {sample.f - state.b_f, sample.w - state.b_w};
}

struct NavStateDerivative {
  Vec3 r_dot = Vec3::Zero();
  Vec3 v_dot = Vec3::Zero();
  /// Tangent of the orientation trajectory, expressed on the inertial side
  /// (the same convention boxplus uses): q_dot = rotate(q, w).
  Vec3 q_dot = Vec3::Zero();
  Vec3 b_f_dot = Vec3::Zero();
  Vec3 b_w_dot = Vec3::Zero();
};

/// Continuous-time equations of motion at the mean, driven by corrected
/// measurements (f, w) and the inertial-frame gravity g_i.
inline NavStateDerivative continuous_dynamics(const NavState& state, const Vec3& f, const Vec3& w,
                                              const Vec3& g_i) {
  NavStateDerivative d;
  d.r_dot = rotate(state.q, state.v);
  d.v_dot = rotate(inverse(state.q), g_i) + f - w.cross(state.v);
  d.q_dot = rotate(state.q, w);
  return d;
}

/// One Euler-forward step of the mean dynamics. Throws for dt <= 0.
inline NavState discretize_euler_forward(const NavState& state, const Vec3& f, const Vec3& w,
                                         const Vec3& g_i, double dt) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("discretize_euler_forward: dt must be positive");
  }
  NavState next;
  next.r = state.r + dt * rotate(state.q, state.v);
  next.v = state.v + dt * (rotate(inverse(state.q), g_i) + f - w.cross(state.v));
  next.q = compose(state.q, exp(Vec3(dt * w)));
  next.b_f = state.b_f;
  next.b_w = state.b_w;
  return next;
}

struct ProcessJacobians {
  Mat15 F = Mat15::Identity();
  Mat15 G = Mat15::Zero();
};

/// Jacobians of the discrete process model: F with respect to the error
/// state, G with respect to the stacked process noise [n_v, n_f, n_w, n_bf,
/// n_bw]. Throws for dt <= 0.
inline ProcessJacobians process_jacobians(const NavState& state, const Vec3& /*f*/, const Vec3& w,
                                          const Vec3& g_i, double dt) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("process_jacobians: dt must be positive");
  }
  const Mat3 C = rotation_matrix(state.q);
  const Mat3 I = Mat3::Identity();
  const Mat3 C_gamma = C * gamma(Vec3(dt * w));

  ProcessJacobians out;
  Mat15& F = out.F;
  F.setIdentity();
  F.block<3, 3>(kIdxR, kIdxV) = dt * C;
  F.block<3, 3>(kIdxR, kIdxPhi) = -dt * hat(Vec3(rotate(state.q, state.v)));
  F.block<3, 3>(kIdxV, kIdxV) = I - dt * hat(w);
  F.block<3, 3>(kIdxV, kIdxPhi) = dt * C.transpose() * hat(g_i);
  F.block<3, 3>(kIdxV, kIdxBf) = -dt * I;
  F.block<3, 3>(kIdxV, kIdxBw) = -dt * hat(state.v);
  F.block<3, 3>(kIdxPhi, kIdxBw) = -dt * C_gamma;

  Mat15& G = out.G;
  G.setZero();
  G.block<3, 3>(kIdxR, 0) = dt * C;
  G.block<3, 3>(kIdxV, 3) = -dt * I;
  G.block<3, 3>(kIdxV, 6) = -dt * hat(state.v);
  G.block<3, 3>(kIdxPhi, 6) = -dt * C_gamma;
  G.block<3, 3>(kIdxBf, 9) = dt * I;
  G.block<3, 3>(kIdxBw, 12) = dt * I;
  return out;
}

/// Discrete process-noise covariance: blockdiag(R_v, R_f, R_w, R_bf, R_bw)/dt.
inline Mat15 process_noise_discrete(const NoiseDensities& noise, double dt) {
  Mat15 q = Mat15::Zero();
  q.block<3, 3>(0, 0) = noise.R_v;
  q.block<3, 3>(3, 3) = noise.R_f;
  q.block<3, 3>(6, 6) = noise.R_w;
  q.block<3, 3>(9, 9) = noise.R_bf;
  q.block<3, 3>(12, 12) = noise.R_bw;
  return q / dt;
}

/// Predicted pose measurement: the state's position and orientation.
inline std::pair<Vec3, Orientationd> measurement_model(const NavState& state) {
  return {state.r, state.q};
}

struct MeasurementJacobians {
  Mat6x15 H = Mat6x15::Zero();
  Mat6 J = Mat6::Identity();
};

/// H selects the position and orientation error blocks; J is identity.
inline MeasurementJacobians measurement_jacobians() {
  MeasurementJacobians out;
  out.H.block<3, 3>(0, kIdxR) = Mat3::Identity();
  out.H.block<3, 3>(3, kIdxPhi) = Mat3::Identity();
  return out;
}

/// Stacked pose-measurement covariance blockdiag(R_p, R_phi).
inline Mat6 measurement_noise(const NoiseDensities& noise) {
  Mat6 r = Mat6::Zero();
  r.block<3, 3>(0, 0) = noise.R_p;
  r.block<3, 3>(3, 3) = noise.R_phi;
  return r;
}

/// Applies a 15-dim error vector to a state: plain addition everywhere,
/// boxplus on the orientation block.
inline NavState nav_boxplus(const NavState& state, const Vec15& delta) {
  NavState out;
  out.r = state.r + delta.segment<3>(kIdxR);
  out.v = state.v + delta.segment<3>(kIdxV);
  out.q = boxplus(state.q, Vec3(delta.segment<3>(kIdxPhi)));
  out.b_f = state.b_f + delta.segment<3>(kIdxBf);
  out.b_w = state.b_w + delta.segment<3>(kIdxBw);
  return out;
}

/// 15-dim error vector between two states (a "minus" b), boxminus on the
/// orientation block.
inline Vec15 nav_boxminus(const NavState& a, const NavState& b) {
  Vec15 d;
  d.segment<3>(kIdxR) = a.r - b.r;
  d.segment<3>(kIdxV) = a.v - b.v;
  d.segment<3>(kIdxPhi) = boxminus(a.q, b.q);
  d.segment<3>(kIdxBf) = a.b_f - b.b_f;
  d.segment<3>(kIdxBw) = a.b_w - b.b_w;
  return d;
}

inline Mat15 symmetrized(const Mat15& m) { return 0.5 * (m + m.transpose()); }

}  // namespace so3kit
