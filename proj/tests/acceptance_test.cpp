// Acceptance suite: one test per release criterion, run at the full sample
// counts and tolerances. Expected values come from independent oracles
// (matrix-exponential series, central finite differences, byte comparison of
// CLI outputs), never from the code paths under test.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "so3kit/checks.hpp"
#include "so3kit/config.hpp"
#include "so3kit/experiment.hpp"
#include "so3kit/rng.hpp"

using so3kit::Mat3;
using so3kit::NavState;
using so3kit::Orientationd;
using so3kit::Rng;
using so3kit::Vec3;

namespace {

namespace fs = std::filesystem;

constexpr std::uint64_t kSeed = 20240915;

std::string config_path(const std::string& name) {
  return std::string(SO3KIT_CONFIG_DIR) + "/" + name;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

TEST(Acceptance, Criterion01_ConsistencyMatrix) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto results = so3kit::consistency_checks(1000, kSeed, 1e-9);
  const double elapsed = seconds_since(t0);
  ASSERT_EQ(results.size(), 4u);
  for (const auto& r : results) {
    EXPECT_TRUE(r.passed) << r.name << " max_error=" << r.max_error;
    EXPECT_EQ(r.samples, 1100u);
    std::cout << "  " << r.name << ": max_error=" << r.max_error << " tol=" << r.tolerance
              << '\n';
  }
  EXPECT_LT(elapsed, 1.0);
}

TEST(Acceptance, Criterion02_BoxOperatorAxioms) {
  const auto results = so3kit::box_axiom_checks(1000, kSeed, 1e-9);
  ASSERT_EQ(results.size(), 3u);
  for (const auto& r : results) {
    EXPECT_TRUE(r.passed) << r.name << " max_error=" << r.max_error;
    std::cout << "  " << r.name << ": max_error=" << r.max_error << '\n';
  }
}

TEST(Acceptance, Criterion03_DerivativeIdentities) {
  const auto results = so3kit::derivative_checks(200, kSeed, 1e-5);
  ASSERT_EQ(results.size(), 7u);
  for (const auto& r : results) {
    EXPECT_TRUE(r.passed) << r.name << " max_error=" << r.max_error;
    std::cout << "  " << r.name << ": max_error=" << r.max_error << '\n';
  }
  const auto time_result = so3kit::time_derivative_check(1e-4);
  EXPECT_TRUE(time_result.passed) << "max_error=" << time_result.max_error;
  std::cout << "  " << time_result.name << ": max_error=" << time_result.max_error << '\n';
}

TEST(Acceptance, Criterion04_RodriguezMatchesSeriesOracle) {
  Rng rng(kSeed);
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    const Vec3 phi = rng.ball(3.0);
    worst = std::max(worst, (so3kit::rodriguez(phi) - oracles::expm_series(so3kit::hat(phi)))
                                .cwiseAbs()
                                .maxCoeff());
  }
  std::cout << "  rodriguez vs matrix-exponential series: max_error=" << worst << '\n';
  EXPECT_LT(worst, 1e-10);
}

TEST(Acceptance, Criterion05_AdjointIdentity) {
  const auto result = so3kit::adjoint_identity_check(1000, kSeed, 1e-9);
  std::cout << "  adjoint identity: max_error=" << result.max_error << '\n';
  EXPECT_TRUE(result.passed) << "max_error=" << result.max_error;
}

TEST(Acceptance, Criterion06_GammaInverseProductAndBranchContinuity) {
  const auto product = so3kit::gamma_product_check(500, kSeed, 1e-8);
  std::cout << "  gamma_inverse * gamma: max_error=" << product.max_error << '\n';
  EXPECT_TRUE(product.passed) << "max_error=" << product.max_error;

  Rng rng(kSeed + 1);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Vec3 dir = rng.gaussian3().normalized();
    const Vec3 below = (so3kit::kSmallAngle * (1.0 - 1e-9)) * dir;
    const Vec3 above = (so3kit::kSmallAngle * (1.0 + 1e-9)) * dir;
    worst = std::max(worst, (so3kit::gamma(below) - so3kit::gamma(above)).cwiseAbs().maxCoeff());
    worst = std::max(
        worst, (so3kit::gamma_inverse(below) - so3kit::gamma_inverse(above)).cwiseAbs().maxCoeff());
    worst = std::max(worst,
                     (so3kit::rodriguez(below) - so3kit::rodriguez(above)).cwiseAbs().maxCoeff());
    worst = std::max(worst, so3kit::orientation_distance(so3kit::exp(below), so3kit::exp(above)));
    worst = std::max(worst, (so3kit::log(so3kit::exp(below)) - below).cwiseAbs().maxCoeff());
    worst = std::max(worst, (so3kit::log(so3kit::exp(above)) - above).cwiseAbs().maxCoeff());
  }
  std::cout << "  small-angle branch continuity: max_error=" << worst << '\n';
  EXPECT_LT(worst, 1e-10);
}

TEST(Acceptance, Criterion07_LogAdditivityFirstOrderConvergence) {
  Rng rng(kSeed);
  const std::vector<double> eps = {1e-2, 1e-3, 1e-4};
  double lo = 1e300;
  double hi = 0.0;
  for (int i = 0; i < 100; ++i) {
    Vec3 a = rng.ball(2.0);
    Vec3 b = rng.ball(2.0);
    while (a.cross(b).norm() < 0.05 * a.norm() * b.norm() || a.norm() < 0.1 || b.norm() < 0.1) {
      a = rng.ball(2.0);
      b = rng.ball(2.0);
    }
    const auto res = so3kit::log_additivity_limit(a, b, eps);
    for (std::size_t j = 0; j + 1 < res.size(); ++j) {
      const double ratio = res[j] / res[j + 1];
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
      EXPECT_GE(ratio, 5.0);
      EXPECT_LE(ratio, 20.0);
    }
  }
  std::cout << "  residual decay per decade: min=" << lo << " max=" << hi << '\n';
}

TEST(Acceptance, Criterion08_ProcessAndMeasurementJacobians) {
  Rng rng(kSeed);
  const Vec3 gravity(0.0, 0.0, -9.81);
  double worst_f = 0.0;
  double worst_g = 0.0;
  double worst_h = 0.0;
  for (const double dt : {1e-3, 1e-2}) {
    for (int i = 0; i < 100; ++i) {
      const NavState s = oracles::random_state(rng);
      so3kit::ImuSample u;
      u.f = rng.ball(5.0);
      u.w = rng.ball(1.0);
      const auto [f, w] = so3kit::correct_imu(u, s);
      const auto jac = so3kit::process_jacobians(s, f, w, gravity, dt);
      worst_f = std::max(
          worst_f,
          (jac.F - oracles::fd_process_jacobian_state(s, u, gravity, dt)).cwiseAbs().maxCoeff());
      worst_g = std::max(
          worst_g,
          (jac.G - oracles::fd_process_jacobian_noise(s, u, gravity, dt)).cwiseAbs().maxCoeff());
      worst_h = std::max(worst_h, (so3kit::measurement_jacobians().H -
                                   oracles::fd_measurement_jacobian(s))
                                      .cwiseAbs()
                                      .maxCoeff());
    }
  }
  std::cout << "  F vs finite differences: max_error=" << worst_f << '\n';
  std::cout << "  G vs finite differences: max_error=" << worst_g << '\n';
  std::cout << "  H vs finite differences: max_error=" << worst_h << '\n';
  EXPECT_LT(worst_f, 1e-5);
  EXPECT_LT(worst_g, 1e-5);
  EXPECT_LT(worst_h, 1e-5);
}

TEST(Acceptance, Criterion09_EndToEndFilter) {
  const auto t0 = std::chrono::steady_clock::now();

  // Noise-free run: exact initialization, vanishing noise everywhere.
  const so3kit::RunConfig quiet = so3kit::load_config(config_path("zero_noise.conf"));
  ASSERT_EQ(quiet.trajectory.kind, so3kit::TrajectoryKind::circle);
  ASSERT_DOUBLE_EQ(quiet.trajectory.duration, 60.0);
  ASSERT_DOUBLE_EQ(quiet.trajectory.imu_rate, 200.0);
  ASSERT_DOUBLE_EQ(quiet.trajectory.pose_rate, 10.0);
  const auto quiet_res = so3kit::run_experiment(quiet);
  double worst_block = 0.0;
  for (std::size_t k = 0; k < quiet_res.gt.size(); ++k) {
    NavState truth = quiet_res.gt.state_at(k);
    truth.b_f = quiet_res.imu.bias_f[k];
    truth.b_w = quiet_res.imu.bias_w[k];
    const so3kit::Vec15 err = so3kit::nav_boxminus(truth, quiet_res.estimates[k]);
    for (const int idx : {so3kit::kIdxR, so3kit::kIdxV, so3kit::kIdxPhi, so3kit::kIdxBf,
                          so3kit::kIdxBw}) {
      worst_block = std::max(worst_block, err.segment<3>(idx).norm());
    }
  }
  std::cout << "  noise-free worst block error: " << worst_block << '\n';
  EXPECT_LT(worst_block, 1e-6);

  // Noisy run: MEMS-grade defaults.
  const so3kit::RunConfig noisy = so3kit::load_config(config_path("default.conf"));
  ASSERT_EQ(noisy.trajectory.kind, so3kit::TrajectoryKind::circle);
  const auto noisy_res = so3kit::run_experiment(noisy);
  const double sigma_p = std::sqrt(noisy.r_p);
  std::cout << "  noisy position rmse: " << noisy_res.rmse.pos << " (bound " << 3.0 * sigma_p
            << ")\n";
  std::cout << "  nees in 95% band: " << 100.0 * noisy_res.nees.frac_in_band << "% of "
            << noisy_res.nees.steps << " updates (mean " << noisy_res.nees.mean << ")\n";
  EXPECT_LT(noisy_res.rmse.pos, 3.0 * sigma_p);
  EXPECT_GE(noisy_res.nees.frac_in_band, 0.60);

  const double elapsed = seconds_since(t0);
  std::cout << "  runtime: " << elapsed << " s\n";
  EXPECT_LT(elapsed, 10.0);
}

bool files_identical(const fs::path& a, const fs::path& b) {
  std::ifstream fa(a, std::ios::binary);
  std::ifstream fb(b, std::ios::binary);
  if (!fa || !fb) return false;
  std::ostringstream sa;
  std::ostringstream sb;
  sa << fa.rdbuf();
  sb << fb.rdbuf();
  return sa.str() == sb.str();
}

TEST(Acceptance, Criterion10_SimulateIsBitDeterministic) {
  const fs::path base = fs::temp_directory_path() / "so3kit_acceptance_determinism";
  fs::remove_all(base);
  fs::create_directories(base);
  const fs::path out1 = base / "run1";
  const fs::path out2 = base / "run2";

  const std::string cli = SO3KIT_CLI_PATH;
  const std::string cfg = config_path("default.conf");
  for (const fs::path& out : {out1, out2}) {
    const std::string cmd =
        "\"" + cli + "\" simulate --config \"" + cfg + "\" --out \"" + out.string() + "\"";
    ASSERT_EQ(std::system(cmd.c_str()), 0) << cmd;
  }
  for (const char* name : {"truth.csv", "imu.csv", "pose.csv", "estimate.csv"}) {
    EXPECT_TRUE(files_identical(out1 / name, out2 / name)) << name;
  }
  fs::remove_all(base);
}

}  // namespace
