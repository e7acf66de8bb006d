#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

#include "so3kit/imu_model.hpp"

namespace so3kit {

/// Error-state filter over NavState: 15x15 covariance on
/// [dr, dv, dphi, db_f, db_w].
struct FilterState {
  NavState mean;
  Mat15 cov = Mat15::Zero();
  double t = 0.0;
};

struct UpdateOptions {
  /// Joseph-form covariance update instead of (I - KH) P.
  bool joseph = false;
  /// Reject measurements whose squared Mahalanobis innovation exceeds the
  /// 99.7% chi-square quantile (6 dof).
  bool chi2_gate = false;
};

/// Condition-number bound above which the innovation covariance is treated as
/// singular.
inline constexpr double kInnovationConditionBound = 1e12;

/// chi2.ppf(0.997, 6)
inline constexpr double kChi2Gate = 19.8046523588496;

/// Propagates mean and covariance over one IMU interval of length dt.
/// Throws for dt <= 0 or a non-finite sample.
inline FilterState predict(const FilterState& fs, const ImuSample& sample,
                           const NoiseDensities& noise, const Vec3& g_i, double dt) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("predict: dt must be positive");
  }
  if (!sample.f.allFinite() || !sample.w.allFinite() || !std::isfinite(sample.t)) {
    throw std::invalid_argument("predict: non-finite IMU sample");
  }
  const auto [f, w] = correct_imu(sample, fs.mean);
  const ProcessJacobians jac = process_jacobians(fs.mean, f, w, g_i, dt);
  const Mat15 q_d = process_noise_discrete(noise, dt);

  FilterState out;
  out.mean = discretize_euler_forward(fs.mean, f, w, g_i, dt);
  out.cov = symmetrized(jac.F * fs.cov * jac.F.transpose() + jac.G * q_d * jac.G.transpose());
  out.t = fs.t + dt;
  return out;
}

/// Stacked innovation: position residual and orientation boxminus residual.
inline Vec6 innovation(const FilterState& fs, const PoseMeasurement& meas) {
  const auto [r_pred, q_pred] = measurement_model(fs.mean);
  Vec6 y;
  y.segment<3>(0) = meas.r - r_pred;
  y.segment<3>(3) = boxminus(meas.q, q_pred);
  return y;
}

/// Pose-measurement update. Throws std::runtime_error if the innovation
/// covariance is numerically singular.
inline FilterState update(const FilterState& fs, const PoseMeasurement& meas,
                          const NoiseDensities& noise, const UpdateOptions& opts = {}) {
  const MeasurementJacobians mj = measurement_jacobians();
  const Mat6 r_m = measurement_noise(noise);
  const Vec6 y = innovation(fs, meas);
  const Mat6 s = mj.H * fs.cov * mj.H.transpose() + mj.J * r_m * mj.J.transpose();

  const Eigen::SelfAdjointEigenSolver<Mat6> eig(s);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi > kInnovationConditionBound * lo) {
    throw std::runtime_error("update: innovation covariance is numerically singular");
  }

  if (opts.chi2_gate) {
    const double mahal2 = y.dot(s.ldlt().solve(y));
    if (mahal2 > kChi2Gate) {
      return fs;
    }
  }

  const Eigen::Matrix<double, kErrorDim, 6> k =
      s.ldlt().solve(mj.H * fs.cov).transpose();
  const Vec15 delta = k * y;

  FilterState out;
  out.mean = nav_boxplus(fs.mean, delta);
  const Mat15 i_kh = Mat15::Identity() - k * mj.H;
  if (opts.joseph) {
    out.cov = symmetrized(i_kh * fs.cov * i_kh.transpose() + k * r_m * k.transpose());
  } else {
    out.cov = symmetrized(i_kh * fs.cov);
  }
  out.t = fs.t;
  return out;
}

}  // namespace so3kit
