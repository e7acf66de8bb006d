#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "so3kit/calculus.hpp"
#include "so3kit/imu_model.hpp"
#include "so3kit/orientation.hpp"
#include "so3kit/rng.hpp"

namespace so3kit {

enum class TrajectoryKind { constant_twist, circle, sinusoid_mix };

/// Screw motion: constant body-frame angular velocity and velocity.
struct TwistParams {
  Vec3 omega = Vec3(0.1, 0.05, -0.08);  // rad/s
  Vec3 vel = Vec3(0.3, 0.0, 0.1);       // m/s
};

/// Planar circle at constant speed, yaw tracking the velocity direction.
struct CircleParams {
  double radius = 1.0;  // m
  double rate = 0.01;   // rad/s
};

/// Sinusoidal position on all three axes plus sinusoidal yaw/roll rocking.
struct SinusoidParams {
  Vec3 pos_amp = Vec3(0.4, 0.3, 0.2);    // m
  Vec3 pos_freq = Vec3(0.3, 0.2, 0.5);   // Hz
  double yaw_amp = 0.4;                  // rad
  double yaw_freq = 0.25;                // Hz
  double roll_amp = 0.2;                 // rad
  double roll_freq = 0.4;                // Hz
};

struct TrajectorySpec {
  TrajectoryKind kind = TrajectoryKind::circle;
  TwistParams twist;
  CircleParams circle;
  SinusoidParams sinusoid;
  double duration = 60.0;   // s
  double imu_rate = 200.0;  // Hz
  double pose_rate = 10.0;  // Hz

  void validate() const {
    if (!(duration > 0.0)) throw std::invalid_argument("TrajectorySpec: duration must be positive");
    if (!(imu_rate > 0.0) || !(pose_rate > 0.0)) {
      throw std::invalid_argument("TrajectorySpec: rates must be positive");
    }
    if (pose_rate > imu_rate) {
      throw std::invalid_argument("TrajectorySpec: pose_rate must not exceed imu_rate");
    }
  }
};

/// Trajectory evaluated at one instant. All quantities are exact closed-form
/// values, never numerically integrated.
struct TrajectoryPoint {
  Vec3 r = Vec3::Zero();    // position in I (m)
  Vec3 v_i = Vec3::Zero();  // velocity in I (m/s)
  Vec3 a_i = Vec3::Zero();  // acceleration in I (m/s^2)
  Orientationd q;           // Phi_IB
  Vec3 w_b = Vec3::Zero();  // angular velocity of B w.r.t. I, in B (rad/s)
};

inline TrajectoryPoint eval_trajectory(const TrajectorySpec& spec, double t) {
  TrajectoryPoint p;
  switch (spec.kind) {
    case TrajectoryKind::constant_twist: {
      const Vec3& w = spec.twist.omega;
      const Vec3& v = spec.twist.vel;
      const Mat3 c_t = rodriguez(Vec3(t * w));
      p.q = exp(Vec3(t * w));
      p.w_b = w;
      p.r = t * gamma(Vec3(t * w)) * v;
      p.v_i = c_t * v;
      p.a_i = w.cross(Vec3(c_t * v));
      break;
    }
    case TrajectoryKind::circle: {
      const double radius = spec.circle.radius;
      const double rate = spec.circle.rate;
      const double a = rate * t;
      p.r = Vec3(radius * std::cos(a), radius * std::sin(a), 0.0);
      p.v_i = Vec3(-radius * rate * std::sin(a), radius * rate * std::cos(a), 0.0);
      p.a_i = -rate * rate * p.r;
      p.q = exp(Vec3(0.0, 0.0, a + M_PI / 2.0));  // yaw along the velocity
      p.w_b = Vec3(0.0, 0.0, rate);
      break;
    }
    case TrajectoryKind::sinusoid_mix: {
      const SinusoidParams& s = spec.sinusoid;
      for (int i = 0; i < 3; ++i) {
        const double om = 2.0 * M_PI * s.pos_freq[i];
        p.r[i] = s.pos_amp[i] * std::sin(om * t);
        p.v_i[i] = s.pos_amp[i] * om * std::cos(om * t);
        p.a_i[i] = -s.pos_amp[i] * om * om * std::sin(om * t);
      }
      const double om_y = 2.0 * M_PI * s.yaw_freq;
      const double om_r = 2.0 * M_PI * s.roll_freq;
      const double yaw = s.yaw_amp * std::sin(om_y * t);
      const double yaw_dot = s.yaw_amp * om_y * std::cos(om_y * t);
      const double roll = s.roll_amp * std::sin(om_r * t);
      const double roll_dot = s.roll_amp * om_r * std::cos(om_r * t);
      p.q = compose(exp(Vec3(0.0, 0.0, yaw)), exp(Vec3(roll, 0.0, 0.0)));
      // Body angular velocity of exp(yaw*e_z) o exp(roll*e_x).
      p.w_b = Vec3(roll_dot, yaw_dot * std::sin(roll), yaw_dot * std::cos(roll));
      break;
    }
  }
  return p;
}

/// Ground-truth trajectory sampled at the IMU rate.
struct GroundTruth {
  std::vector<double> t;
  std::vector<Vec3> r;
  std::vector<Vec3> v_b;  // velocity in B, matching the state convention
  std::vector<Vec3> a_i;
  std::vector<Orientationd> q;
  std::vector<Vec3> w_b;

  std::size_t size() const { return t.size(); }

  NavState state_at(std::size_t k) const {
    NavState s;
    s.r = r[k];
    s.v = v_b[k];
    s.q = q[k];
    return s;
  }
};

inline GroundTruth generate_trajectory(const TrajectorySpec& spec) {
  spec.validate();
  const double dt = 1.0 / spec.imu_rate;
  const auto n = static_cast<std::size_t>(std::llround(spec.duration * spec.imu_rate)) + 1;
  GroundTruth gt;
  gt.t.reserve(n);
  gt.r.reserve(n);
  gt.v_b.reserve(n);
  gt.a_i.reserve(n);
  gt.q.reserve(n);
  gt.w_b.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) * dt;
    const TrajectoryPoint p = eval_trajectory(spec, t);
    gt.t.push_back(t);
    gt.r.push_back(p.r);
    gt.v_b.push_back(rotate(inverse(p.q), p.v_i));
    gt.a_i.push_back(p.a_i);
    gt.q.push_back(p.q);
    gt.w_b.push_back(p.w_b);
  }
  return gt;
}

/// IMU measurement stream with the bias trajectories that generated it.
struct ImuStream {
  std::vector<ImuSample> samples;
  std::vector<Vec3> bias_f;
  std::vector<Vec3> bias_w;
};

/// Synthesizes IMU readings from ground truth: specific force through the
/// inverse measurement model, gyro from the body angular velocity, both with
/// additive bias random walks (starting at zero) and white noise drawn as
/// N(0, R/dt). Draw order per sample: n_f, n_w, n_bf, n_bw.
inline ImuStream synthesize_imu(const GroundTruth& gt, const NoiseDensities& noise, const Vec3& g_i,
                                std::uint64_t seed) {
  ImuStream out;
  const std::size_t n = gt.size();
  out.samples.reserve(n);
  out.bias_f.reserve(n);
  out.bias_w.reserve(n);
  const double dt = n > 1 ? gt.t[1] - gt.t[0] : 1.0;
  const Mat3 l_f = psd_sqrt(Mat3(noise.R_f / dt));
  const Mat3 l_w = psd_sqrt(Mat3(noise.R_w / dt));
  const Mat3 l_bf = psd_sqrt(Mat3(noise.R_bf / dt));
  const Mat3 l_bw = psd_sqrt(Mat3(noise.R_bw / dt));
  Rng rng(seed);
  Vec3 b_f = Vec3::Zero();
  Vec3 b_w = Vec3::Zero();
  for (std::size_t k = 0; k < n; ++k) {
    out.bias_f.push_back(b_f);
    out.bias_w.push_back(b_w);
    ImuSample s;
    s.t = gt.t[k];
    s.f = rotate(inverse(gt.q[k]), Vec3(gt.a_i[k] - g_i)) + b_f + l_f * rng.gaussian3();
    s.w = gt.w_b[k] + b_w + l_w * rng.gaussian3();
    out.samples.push_back(s);
    b_f += dt * (l_bf * rng.gaussian3());
    b_w += dt * (l_bw * rng.gaussian3());
  }
  return out;
}

/// Pose measurements every imu_rate/pose_rate-th IMU sample (starting one
/// stride after t = 0): position with additive noise, orientation via boxplus
/// of a drawn tangent perturbation. Draw order per sample: n_p, n_phi.
inline std::vector<PoseMeasurement> synthesize_pose(const GroundTruth& gt,
                                                    const NoiseDensities& noise, double imu_rate,
                                                    double pose_rate, std::uint64_t seed) {
  std::vector<PoseMeasurement> out;
  const auto stride = static_cast<std::size_t>(std::llround(imu_rate / pose_rate));
  if (stride == 0) throw std::invalid_argument("synthesize_pose: pose_rate exceeds imu_rate");
  const Mat3 l_p = psd_sqrt(noise.R_p);
  const Mat3 l_phi = psd_sqrt(noise.R_phi);
  Rng rng(seed);
  for (std::size_t k = stride; k < gt.size(); k += stride) {
    PoseMeasurement m;
    m.t = gt.t[k];
    m.r = gt.r[k] + l_p * rng.gaussian3();
    m.q = boxplus(gt.q[k], Vec3(l_phi * rng.gaussian3()));
    out.push_back(m);
  }
  return out;
}

}  // namespace so3kit
