#pragma once

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "so3kit/imu_model.hpp"
#include "so3kit/simulator.hpp"

namespace so3kit {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// 17 significant digits: round-trip exact for doubles.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Column orders are fixed. truth/estimate:
//   t, rx, ry, rz, vx, vy, vz, q0, q1, q2, q3, bfx, bfy, bfz, bwx, bwy, bwz
// imu: t, fx, fy, fz, wx, wy, wz
// pose: t, rx, ry, rz, q0, q1, q2, q3
// Quaternions are serialized real-first (q0, q1, q2, q3), Hamilton convention.

inline constexpr const char* kStateCsvHeader =
    "t,rx,ry,rz,vx,vy,vz,q0,q1,q2,q3,bfx,bfy,bfz,bwx,bwy,bwz";
inline constexpr const char* kImuCsvHeader = "t,fx,fy,fz,wx,wy,wz";
inline constexpr const char* kPoseCsvHeader = "t,rx,ry,rz,q0,q1,q2,q3";

inline std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  return out;
}

inline void append_vec3(std::string& line, const Vec3& v) {
  for (int i = 0; i < 3; ++i) {
    line += ',';
    line += format_double(v[i]);
  }
}

inline void append_orientation(std::string& line, const Orientationd& q) {
  line += ',';
  line += format_double(q.q0());
  append_vec3(line, q.qv());
}

inline std::string state_csv_row(double t, const NavState& s) {
  std::string line = format_double(t);
  append_vec3(line, s.r);
  append_vec3(line, s.v);
  append_orientation(line, s.q);
  append_vec3(line, s.b_f);
  append_vec3(line, s.b_w);
  return line;
}

inline void write_truth_csv(const std::string& path, const GroundTruth& gt,
                            const ImuStream& imu) {
  std::ofstream out = open_for_write(path);
  out << kStateCsvHeader << '\n';
  for (std::size_t k = 0; k < gt.size(); ++k) {
    NavState s = gt.state_at(k);
    s.b_f = imu.bias_f[k];
    s.b_w = imu.bias_w[k];
    out << state_csv_row(gt.t[k], s) << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

inline void write_estimate_csv(const std::string& path, const std::vector<double>& t,
                               const std::vector<NavState>& states) {
  std::ofstream out = open_for_write(path);
  out << kStateCsvHeader << '\n';
  for (std::size_t k = 0; k < states.size(); ++k) {
    out << state_csv_row(t[k], states[k]) << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

inline void write_imu_csv(const std::string& path, const std::vector<ImuSample>& samples) {
  std::ofstream out = open_for_write(path);
  out << kImuCsvHeader << '\n';
  for (const ImuSample& s : samples) {
    std::string line = format_double(s.t);
    append_vec3(line, s.f);
    append_vec3(line, s.w);
    out << line << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

inline void write_pose_csv(const std::string& path, const std::vector<PoseMeasurement>& poses) {
  std::ofstream out = open_for_write(path);
  out << kPoseCsvHeader << '\n';
  for (const PoseMeasurement& m : poses) {
    std::string line = format_double(m.t);
    append_vec3(line, m.r);
    append_orientation(line, m.q);
    out << line << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace so3kit
