#pragma once

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "so3kit/config.hpp"
#include "so3kit/csv.hpp"
#include "so3kit/estimator.hpp"
#include "so3kit/simulator.hpp"

namespace so3kit {

// Central 95% band of the chi-square distribution with 15 dof
// (chi2.ppf(0.025, 15), chi2.ppf(0.975, 15)).
inline constexpr double kNeesBandLo = 6.262137795043253;
inline constexpr double kNeesBandHi = 27.488392863442975;

/// Per-axis RMSE of each state block over the whole run.
struct BlockRmse {
  double pos = 0.0;
  double vel = 0.0;
  double ori = 0.0;
  double b_f = 0.0;
  double b_w = 0.0;
};

struct NeesStats {
  double mean = 0.0;
  double frac_in_band = 0.0;
  std::size_t steps = 0;
};

struct ExperimentResult {
  GroundTruth gt;
  ImuStream imu;
  std::vector<PoseMeasurement> pose;
  std::vector<NavState> estimates;  // one per ground-truth sample
  std::vector<Mat15> covariances;
  BlockRmse rmse;
  NeesStats nees;
};

/// Simulates the configured trajectory and runs the error-state filter over
/// it. IMU sample k drives the predict step from t_k to t_{k+1}; a pose
/// measurement is applied right after the predict step that lands on its
/// timestamp.
inline ExperimentResult run_experiment(const RunConfig& cfg) {
  cfg.validate();
  ExperimentResult res;
  res.gt = generate_trajectory(cfg.trajectory);
  const NoiseDensities noise = cfg.noise();
  res.imu = synthesize_imu(res.gt, noise, cfg.gravity, derive_seed(cfg.seed, 1));
  res.pose = synthesize_pose(res.gt, noise, cfg.trajectory.imu_rate, cfg.trajectory.pose_rate,
                             derive_seed(cfg.seed, 2));

  FilterState fs;
  fs.mean = cfg.init_from_truth ? res.gt.state_at(0) : cfg.init_state;
  fs.cov = cfg.p0();
  fs.t = res.gt.t.front();

  res.estimates.reserve(res.gt.size());
  res.covariances.reserve(res.gt.size());
  res.estimates.push_back(fs.mean);
  res.covariances.push_back(fs.cov);

  std::size_t pose_idx = 0;
  double nees_sum = 0.0;
  std::size_t nees_in_band = 0;
  std::size_t nees_steps = 0;

  for (std::size_t k = 1; k < res.gt.size(); ++k) {
    const double dt = res.gt.t[k] - res.gt.t[k - 1];
    fs = predict(fs, res.imu.samples[k - 1], noise, cfg.gravity, dt);
    if (pose_idx < res.pose.size() && res.pose[pose_idx].t <= res.gt.t[k] + 0.5 * dt) {
      fs = update(fs, res.pose[pose_idx], noise);
      ++pose_idx;

      NavState truth = res.gt.state_at(k);
      truth.b_f = res.imu.bias_f[k];
      truth.b_w = res.imu.bias_w[k];
      const Vec15 err = nav_boxminus(truth, fs.mean);
      const double nees = err.dot(fs.cov.ldlt().solve(err));
      nees_sum += nees;
      nees_steps += 1;
      if (nees >= kNeesBandLo && nees <= kNeesBandHi) ++nees_in_band;
    }
    res.estimates.push_back(fs.mean);
    res.covariances.push_back(fs.cov);
  }

  if (nees_steps > 0) {
    res.nees.mean = nees_sum / static_cast<double>(nees_steps);
    res.nees.frac_in_band = static_cast<double>(nees_in_band) / static_cast<double>(nees_steps);
    res.nees.steps = nees_steps;
  }

  double se_pos = 0.0, se_vel = 0.0, se_ori = 0.0, se_bf = 0.0, se_bw = 0.0;
  for (std::size_t k = 0; k < res.gt.size(); ++k) {
    NavState truth = res.gt.state_at(k);
    truth.b_f = res.imu.bias_f[k];
    truth.b_w = res.imu.bias_w[k];
    const Vec15 err = nav_boxminus(truth, res.estimates[k]);
    se_pos += err.segment<3>(kIdxR).squaredNorm();
    se_vel += err.segment<3>(kIdxV).squaredNorm();
    se_ori += err.segment<3>(kIdxPhi).squaredNorm();
    se_bf += err.segment<3>(kIdxBf).squaredNorm();
    se_bw += err.segment<3>(kIdxBw).squaredNorm();
  }
  const double denom = 3.0 * static_cast<double>(res.gt.size());
  res.rmse.pos = std::sqrt(se_pos / denom);
  res.rmse.vel = std::sqrt(se_vel / denom);
  res.rmse.ori = std::sqrt(se_ori / denom);
  res.rmse.b_f = std::sqrt(se_bf / denom);
  res.rmse.b_w = std::sqrt(se_bw / denom);
  return res;
}

inline std::string summary_line(const ExperimentResult& res) {
  std::string s = "rmse_pos=" + format_double(res.rmse.pos);
  s += " rmse_vel=" + format_double(res.rmse.vel);
  s += " rmse_ori=" + format_double(res.rmse.ori);
  s += " rmse_bf=" + format_double(res.rmse.b_f);
  s += " rmse_bw=" + format_double(res.rmse.b_w);
  s += " nees_mean=" + format_double(res.nees.mean);
  s += " nees_in_band=" + format_double(res.nees.frac_in_band);
  s += " updates=" + std::to_string(res.nees.steps);
  return s;
}

/// Writes truth.csv, imu.csv, pose.csv, estimate.csv and summary.txt into
/// out_dir (created if missing).
inline void write_experiment(const ExperimentResult& res, const std::string& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory: " + out_dir);
  const std::filesystem::path dir(out_dir);
  write_truth_csv((dir / "truth.csv").string(), res.gt, res.imu);
  write_imu_csv((dir / "imu.csv").string(), res.imu.samples);
  write_pose_csv((dir / "pose.csv").string(), res.pose);
  write_estimate_csv((dir / "estimate.csv").string(), res.gt.t, res.estimates);
  std::ofstream summary = open_for_write((dir / "summary.txt").string());
  summary << summary_line(res) << '\n';
  if (!summary) throw IoError("write failed: " + (dir / "summary.txt").string());
}

}  // namespace so3kit
