#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "so3kit/csv.hpp"
#include "so3kit/imu_model.hpp"
#include "so3kit/simulator.hpp"

namespace so3kit {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Full experiment configuration. Files are flat `key = value` text; values
/// are scalars, words, or whitespace-separated tuples. Unknown keys are
/// rejected. Every key has a default, so an empty file is a valid config.
struct RunConfig {
  TrajectorySpec trajectory;

  // Isotropic noise levels: process densities r_* (units^2/Hz) and pose
  // measurement variances r_p (m^2), r_phi (rad^2).
  double r_v = 1e-6;
  double r_f = 1e-4;
  double r_w = 1e-6;
  double r_bf = 1e-8;
  double r_bw = 1e-10;
  double r_p = 2.5e-3;
  double r_phi = 1e-4;

  /// When true the filter mean starts at the exact trajectory state at t = 0
  /// and the explicit init.* state values are ignored.
  bool init_from_truth = true;
  NavState init_state;

  // Initial covariance: one variance per error-state block.
  double p0_pos = 1e-4;
  double p0_vel = 1e-4;
  double p0_ori = 1e-4;
  double p0_bf = 1e-6;
  double p0_bw = 1e-8;

  Vec3 gravity = Vec3(0.0, 0.0, -9.81);
  std::uint64_t seed = 42;
  std::string out_dir = "out";

  NoiseDensities noise() const {
    return NoiseDensities::isotropic(r_v, r_f, r_w, r_bf, r_bw, r_p, r_phi);
  }

  Mat15 p0() const {
    Mat15 p = Mat15::Zero();
    p.block<3, 3>(kIdxR, kIdxR) = p0_pos * Mat3::Identity();
    p.block<3, 3>(kIdxV, kIdxV) = p0_vel * Mat3::Identity();
    p.block<3, 3>(kIdxPhi, kIdxPhi) = p0_ori * Mat3::Identity();
    p.block<3, 3>(kIdxBf, kIdxBf) = p0_bf * Mat3::Identity();
    p.block<3, 3>(kIdxBw, kIdxBw) = p0_bw * Mat3::Identity();
    return p;
  }

  void validate() const {
    try {
      trajectory.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    for (double d : {r_v, r_f, r_w, r_bf, r_bw, r_p, r_phi, p0_pos, p0_vel, p0_ori, p0_bf, p0_bw}) {
      if (!(d >= 0.0)) throw ConfigError("noise and covariance values must be non-negative");
    }
    if (!gravity.allFinite()) throw ConfigError("gravity must be finite");
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

inline std::vector<std::string> tokens(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

inline double parse_double(const std::string& key, const std::string& tok) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    throw ConfigError("invalid number for key '" + key + "': " + tok);
  }
  if (used != tok.size()) throw ConfigError("invalid number for key '" + key + "': " + tok);
  return v;
}

struct KeyValues {
  std::map<std::string, std::vector<std::string>> kv;

  bool has(const std::string& key) const { return kv.count(key) != 0; }

  const std::vector<std::string>& at(const std::string& key, std::size_t arity) const {
    const auto& toks = kv.at(key);
    if (toks.size() != arity) {
      throw ConfigError("key '" + key + "' expects " + std::to_string(arity) + " value(s)");
    }
    return toks;
  }

  void scalar(const std::string& key, double* dst) {
    if (!has(key)) return;
    *dst = parse_double(key, at(key, 1)[0]);
    kv.erase(key);
  }

  void vec3(const std::string& key, Vec3* dst) {
    if (!has(key)) return;
    const auto& toks = at(key, 3);
    for (int i = 0; i < 3; ++i) (*dst)[i] = parse_double(key, toks[i]);
    kv.erase(key);
  }

  void boolean(const std::string& key, bool* dst) {
    if (!has(key)) return;
    const std::string& tok = at(key, 1)[0];
    if (tok == "true") {
      *dst = true;
    } else if (tok == "false") {
      *dst = false;
    } else {
      throw ConfigError("key '" + key + "' expects true or false");
    }
    kv.erase(key);
  }

  void word(const std::string& key, std::string* dst) {
    if (!has(key)) return;
    *dst = at(key, 1)[0];
    kv.erase(key);
  }
};

}  // namespace detail

inline const char* to_string(TrajectoryKind kind) {
  switch (kind) {
    case TrajectoryKind::constant_twist: return "constant-twist";
    case TrajectoryKind::circle: return "circle";
    case TrajectoryKind::sinusoid_mix: return "sinusoid-mix";
  }
  return "circle";
}

inline TrajectoryKind trajectory_kind_from_string(const std::string& s) {
  if (s == "constant-twist") return TrajectoryKind::constant_twist;
  if (s == "circle") return TrajectoryKind::circle;
  if (s == "sinusoid-mix") return TrajectoryKind::sinusoid_mix;
  throw ConfigError("unknown trajectory kind: " + s);
}

/// Parses a config from text. Lines are `key = value`, '#' starts a comment.
/// Missing keys keep their defaults; unknown keys are an error.
inline RunConfig parse_config(const std::string& text) {
  detail::KeyValues kvs;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("malformed config line: " + line);
    const std::string key = detail::trim(line.substr(0, eq));
    const std::vector<std::string> vals = detail::tokens(line.substr(eq + 1));
    if (key.empty() || vals.empty()) throw ConfigError("malformed config line: " + line);
    if (kvs.kv.count(key)) throw ConfigError("duplicate key: " + key);
    kvs.kv[key] = vals;
  }

  RunConfig cfg;
  if (kvs.has("trajectory.kind")) {
    cfg.trajectory.kind = trajectory_kind_from_string(kvs.at("trajectory.kind", 1)[0]);
    kvs.kv.erase("trajectory.kind");
  }
  kvs.scalar("trajectory.duration", &cfg.trajectory.duration);
  kvs.scalar("trajectory.imu_rate", &cfg.trajectory.imu_rate);
  kvs.scalar("trajectory.pose_rate", &cfg.trajectory.pose_rate);
  kvs.vec3("twist.omega", &cfg.trajectory.twist.omega);
  kvs.vec3("twist.vel", &cfg.trajectory.twist.vel);
  kvs.scalar("circle.radius", &cfg.trajectory.circle.radius);
  kvs.scalar("circle.rate", &cfg.trajectory.circle.rate);
  kvs.vec3("sinusoid.pos_amp", &cfg.trajectory.sinusoid.pos_amp);
  kvs.vec3("sinusoid.pos_freq", &cfg.trajectory.sinusoid.pos_freq);
  kvs.scalar("sinusoid.yaw_amp", &cfg.trajectory.sinusoid.yaw_amp);
  kvs.scalar("sinusoid.yaw_freq", &cfg.trajectory.sinusoid.yaw_freq);
  kvs.scalar("sinusoid.roll_amp", &cfg.trajectory.sinusoid.roll_amp);
  kvs.scalar("sinusoid.roll_freq", &cfg.trajectory.sinusoid.roll_freq);
  kvs.scalar("noise.r_v", &cfg.r_v);
  kvs.scalar("noise.r_f", &cfg.r_f);
  kvs.scalar("noise.r_w", &cfg.r_w);
  kvs.scalar("noise.r_bf", &cfg.r_bf);
  kvs.scalar("noise.r_bw", &cfg.r_bw);
  kvs.scalar("noise.r_p", &cfg.r_p);
  kvs.scalar("noise.r_phi", &cfg.r_phi);
  kvs.boolean("init.from_truth", &cfg.init_from_truth);
  kvs.vec3("init.pos", &cfg.init_state.r);
  kvs.vec3("init.vel", &cfg.init_state.v);
  if (kvs.has("init.q")) {
    const auto& toks = kvs.at("init.q", 4);
    const double q0 = detail::parse_double("init.q", toks[0]);
    Vec3 qv;
    for (int i = 0; i < 3; ++i) qv[i] = detail::parse_double("init.q", toks[i + 1]);
    try {
      cfg.init_state.q = Orientationd(q0, qv);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("init.q: ") + e.what());
    }
    kvs.kv.erase("init.q");
  }
  kvs.vec3("init.b_f", &cfg.init_state.b_f);
  kvs.vec3("init.b_w", &cfg.init_state.b_w);
  kvs.scalar("p0.pos", &cfg.p0_pos);
  kvs.scalar("p0.vel", &cfg.p0_vel);
  kvs.scalar("p0.ori", &cfg.p0_ori);
  kvs.scalar("p0.b_f", &cfg.p0_bf);
  kvs.scalar("p0.b_w", &cfg.p0_bw);
  kvs.vec3("gravity", &cfg.gravity);
  if (kvs.has("seed")) {
    const std::string& tok = kvs.at("seed", 1)[0];
    try {
      std::size_t used = 0;
      cfg.seed = std::stoull(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ConfigError("invalid seed: " + tok);
    }
    kvs.kv.erase("seed");
  }
  kvs.word("out_dir", &cfg.out_dir);

  if (!kvs.kv.empty()) {
    throw ConfigError("unknown config key: " + kvs.kv.begin()->first);
  }
  cfg.validate();
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

/// Canonical text form: every key in fixed order. serialize/parse round-trips
/// exactly (all numbers use 17 significant digits).
inline std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream out;
  const auto num = [](double v) { return format_double(v); };
  const auto vec = [&](const Vec3& v) {
    return num(v[0]) + " " + num(v[1]) + " " + num(v[2]);
  };
  out << "trajectory.kind = " << to_string(cfg.trajectory.kind) << '\n';
  out << "trajectory.duration = " << num(cfg.trajectory.duration) << '\n';
  out << "trajectory.imu_rate = " << num(cfg.trajectory.imu_rate) << '\n';
  out << "trajectory.pose_rate = " << num(cfg.trajectory.pose_rate) << '\n';
  out << "twist.omega = " << vec(cfg.trajectory.twist.omega) << '\n';
  out << "twist.vel = " << vec(cfg.trajectory.twist.vel) << '\n';
  out << "circle.radius = " << num(cfg.trajectory.circle.radius) << '\n';
  out << "circle.rate = " << num(cfg.trajectory.circle.rate) << '\n';
  out << "sinusoid.pos_amp = " << vec(cfg.trajectory.sinusoid.pos_amp) << '\n';
  out << "sinusoid.pos_freq = " << vec(cfg.trajectory.sinusoid.pos_freq) << '\n';
  out << "sinusoid.yaw_amp = " << num(cfg.trajectory.sinusoid.yaw_amp) << '\n';
  out << "sinusoid.yaw_freq = " << num(cfg.trajectory.sinusoid.yaw_freq) << '\n';
  out << "sinusoid.roll_amp = " << num(cfg.trajectory.sinusoid.roll_amp) << '\n';
  out << "sinusoid.roll_freq = " << num(cfg.trajectory.sinusoid.roll_freq) << '\n';
  out << "noise.r_v = " << num(cfg.r_v) << '\n';
  out << "noise.r_f = " << num(cfg.r_f) << '\n';
  out << "noise.r_w = " << num(cfg.r_w) << '\n';
  out << "noise.r_bf = " << num(cfg.r_bf) << '\n';
  out << "noise.r_bw = " << num(cfg.r_bw) << '\n';
  out << "noise.r_p = " << num(cfg.r_p) << '\n';
  out << "noise.r_phi = " << num(cfg.r_phi) << '\n';
  out << "init.from_truth = " << (cfg.init_from_truth ? "true" : "false") << '\n';
  out << "init.pos = " << vec(cfg.init_state.r) << '\n';
  out << "init.vel = " << vec(cfg.init_state.v) << '\n';
  out << "init.q = " << num(cfg.init_state.q.q0()) << " " << vec(cfg.init_state.q.qv()) << '\n';
  out << "init.b_f = " << vec(cfg.init_state.b_f) << '\n';
  out << "init.b_w = " << vec(cfg.init_state.b_w) << '\n';
  out << "p0.pos = " << num(cfg.p0_pos) << '\n';
  out << "p0.vel = " << num(cfg.p0_vel) << '\n';
  out << "p0.ori = " << num(cfg.p0_ori) << '\n';
  out << "p0.b_f = " << num(cfg.p0_bf) << '\n';
  out << "p0.b_w = " << num(cfg.p0_bw) << '\n';
  out << "gravity = " << vec(cfg.gravity) << '\n';
  out << "seed = " << cfg.seed << '\n';
  out << "out_dir = " << cfg.out_dir << '\n';
  return out.str();
}

}  // namespace so3kit
