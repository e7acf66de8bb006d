#include "so3kit/config.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "so3kit/csv.hpp"

using so3kit::ConfigError;
using so3kit::parse_config;
using so3kit::RunConfig;
using so3kit::serialize_config;

namespace {

TEST(Config, EmptyTextGivesDefaults) {
  const RunConfig cfg = parse_config("");
  EXPECT_EQ(cfg.trajectory.kind, so3kit::TrajectoryKind::circle);
  EXPECT_EQ(cfg.seed, 42u);
  EXPECT_DOUBLE_EQ(cfg.trajectory.imu_rate, 200.0);
}

TEST(Config, ParsesValuesAndComments) {
  const RunConfig cfg = parse_config(
      "# comment line\n"
      "trajectory.kind = sinusoid-mix   # trailing comment\n"
      "trajectory.duration = 12.5\n"
      "gravity = 0 0 -9.80665\n"
      "seed = 1234\n"
      "init.from_truth = false\n"
      "init.q = 0 0 0 1\n");
  EXPECT_EQ(cfg.trajectory.kind, so3kit::TrajectoryKind::sinusoid_mix);
  EXPECT_DOUBLE_EQ(cfg.trajectory.duration, 12.5);
  EXPECT_DOUBLE_EQ(cfg.gravity.z(), -9.80665);
  EXPECT_EQ(cfg.seed, 1234u);
  EXPECT_FALSE(cfg.init_from_truth);
  EXPECT_DOUBLE_EQ(cfg.init_state.q.q0(), 0.0);
  EXPECT_DOUBLE_EQ(cfg.init_state.q.qv().z(), 1.0);
}

TEST(Config, RejectsUnknownKey) {
  EXPECT_THROW(parse_config("no.such.key = 1\n"), ConfigError);
}

TEST(Config, RejectsMalformedInput) {
  EXPECT_THROW(parse_config("just some words\n"), ConfigError);
  EXPECT_THROW(parse_config("seed = \n"), ConfigError);
  EXPECT_THROW(parse_config("seed = abc\n"), ConfigError);
  EXPECT_THROW(parse_config("gravity = 1 2\n"), ConfigError);
  EXPECT_THROW(parse_config("trajectory.duration = 1x\n"), ConfigError);
  EXPECT_THROW(parse_config("trajectory.kind = helix\n"), ConfigError);
  EXPECT_THROW(parse_config("seed = 1\nseed = 2\n"), ConfigError);
  EXPECT_THROW(parse_config("init.from_truth = yes\n"), ConfigError);
}

TEST(Config, RejectsInvalidValues) {
  EXPECT_THROW(parse_config("trajectory.duration = -5\n"), ConfigError);
  EXPECT_THROW(parse_config("noise.r_f = -1\n"), ConfigError);
  EXPECT_THROW(parse_config("trajectory.pose_rate = 400\n"), ConfigError);
  EXPECT_THROW(parse_config("init.q = 2 0 0 0\n"), ConfigError);
}

TEST(Config, SerializeParseRoundTripIsIdempotent) {
  RunConfig cfg;
  cfg.trajectory.kind = so3kit::TrajectoryKind::constant_twist;
  cfg.trajectory.duration = 17.25;
  cfg.trajectory.twist.omega = so3kit::Vec3(0.1, -0.2, 0.3);
  cfg.r_f = 3.7e-5;
  cfg.seed = 987654321;
  cfg.init_from_truth = false;
  cfg.out_dir = "somewhere";

  const std::string once = serialize_config(cfg);
  const std::string twice = serialize_config(parse_config(once));
  EXPECT_EQ(once, twice);

  const RunConfig back = parse_config(once);
  EXPECT_EQ(back.trajectory.kind, cfg.trajectory.kind);
  EXPECT_DOUBLE_EQ(back.trajectory.duration, cfg.trajectory.duration);
  EXPECT_EQ(back.trajectory.twist.omega, cfg.trajectory.twist.omega);
  EXPECT_DOUBLE_EQ(back.r_f, cfg.r_f);
  EXPECT_EQ(back.seed, cfg.seed);
  EXPECT_EQ(back.out_dir, cfg.out_dir);
}

TEST(Config, LoadFromMissingFileSignalsIoError) {
  EXPECT_THROW(so3kit::load_config("/nonexistent/path/to.conf"), so3kit::IoError);
}

TEST(FormatDouble, RoundTripExact) {
  for (const double v : {0.1, 1.0 / 3.0, -9.81, 2.5e-3, 1e-300, 0.0, 12345.678901234567}) {
    const std::string s = so3kit::format_double(v);
    EXPECT_EQ(std::stod(s), v) << s;
  }
}

TEST(Csv, HeadersAndColumnCounts) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "so3kit_csv_test";
  fs::create_directories(dir);

  so3kit::TrajectorySpec spec;
  spec.duration = 0.1;
  const auto gt = so3kit::generate_trajectory(spec);
  const auto imu = so3kit::synthesize_imu(gt, so3kit::NoiseDensities{},
                                          so3kit::Vec3(0, 0, -9.81), 1);
  so3kit::write_truth_csv((dir / "truth.csv").string(), gt, imu);
  so3kit::write_imu_csv((dir / "imu.csv").string(), imu.samples);

  std::ifstream in(dir / "truth.csv");
  std::string header;
  ASSERT_TRUE(std::getline(in, header));
  EXPECT_EQ(header, "t,rx,ry,rz,vx,vy,vz,q0,q1,q2,q3,bfx,bfy,bfz,bwx,bwy,bwz");
  std::string row;
  std::size_t rows = 0;
  while (std::getline(in, row)) {
    EXPECT_EQ(std::count(row.begin(), row.end(), ','), 16);
    ++rows;
  }
  EXPECT_EQ(rows, gt.size());

  std::ifstream imu_in(dir / "imu.csv");
  ASSERT_TRUE(std::getline(imu_in, header));
  EXPECT_EQ(header, "t,fx,fy,fz,wx,wy,wz");

  fs::remove_all(dir);
}

}  // namespace
