#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "so3kit/calculus.hpp"
#include "so3kit/orientation.hpp"
#include "so3kit/rng.hpp"
#include "so3kit/simulator.hpp"

namespace so3kit {

struct CheckResult {
  std::string name;
  std::size_t samples = 0;
  double max_error = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

namespace detail {

inline CheckResult make_result(std::string name, std::size_t samples, double max_error,
                               double tolerance) {
  CheckResult r;
  r.name = std::move(name);
  r.samples = samples;
  r.max_error = max_error;
  r.tolerance = tolerance;
  r.passed = max_error <= tolerance;
  return r;
}

/// Rotation vectors for the near-identity sweep, norms log-spaced in
/// [1e-12, 1e-4] to exercise the small-angle branches on both sides.
inline Vec3 small_angle_sample(Rng& rng, std::size_t i, std::size_t n) {
  const double lo = -12.0;
  const double hi = -4.0;
  const double expo = lo + (hi - lo) * (n > 1 ? static_cast<double>(i) / (n - 1) : 0.0);
  Vec3 dir = rng.gaussian3();
  while (dir.norm() < 1e-12) dir = rng.gaussian3();
  return std::pow(10.0, expo) * dir.normalized();
}

/// Generic pair of rotation vectors for the log-additivity limit; redraws the
/// measure-zero near-collinear pairs for which the limit converges at a
/// different order.
inline std::pair<Vec3, Vec3> generic_pair(Rng& rng) {
  while (true) {
    const Vec3 a = rng.ball(2.0);
    const Vec3 b = rng.ball(2.0);
    if (a.cross(b).norm() > 0.05 * a.norm() * b.norm() && a.norm() > 0.1 && b.norm() > 0.1) {
      return {a, b};
    }
  }
}

}  // namespace detail

/// The four implementation-consistency tests: coordinate map vs rotation
/// matrix, concatenation homomorphism, exp vs Rodriguez, exp/log roundtrip.
/// Each runs on `samples` random orientations plus a near-identity sweep.
inline std::vector<CheckResult> consistency_checks(std::size_t samples, std::uint64_t seed,
                                                   double tol = 1e-9) {
  Rng rng(seed);
  const std::size_t n_small = std::max<std::size_t>(samples / 10, 10);

  double e_map = 0.0, e_concat = 0.0, e_rod = 0.0, e_roundtrip = 0.0;
  const auto run_sample = [&](const Orientationd& q1, const Vec3& phi) {
    const Orientationd q2 = exp(phi);
    const Vec3 r = rng.ball(5.0);
    e_map = std::max(e_map, (rotation_matrix(q1) * r - rotate(q1, r)).norm());
    e_concat = std::max(e_concat,
                        (rotate(compose(q1, q2), r) - rotate(q1, Vec3(rotate(q2, r)))).norm());
    e_rod = std::max(e_rod,
                     (rotation_matrix(q2) - rodriguez(phi)).cwiseAbs().maxCoeff());
    e_roundtrip = std::max(e_roundtrip, orientation_distance(exp(Vec3(log(q1))), q1));
  };
  for (std::size_t i = 0; i < samples; ++i) {
    run_sample(rng.orientation(), rng.ball(M_PI - 1e-3));
  }
  for (std::size_t i = 0; i < n_small; ++i) {
    const Vec3 phi = detail::small_angle_sample(rng, i, n_small);
    run_sample(exp(phi), phi);
  }

  const std::size_t n = samples + n_small;
  return {
      detail::make_result("coordinate map vs rotation matrix", n, e_map, tol),
      detail::make_result("concatenation homomorphism", n, e_concat, tol),
      detail::make_result("exp matches Rodriguez formula", n, e_rod, tol),
      detail::make_result("exp/log roundtrip", n, e_roundtrip, tol),
  };
}

/// The three boxplus/boxminus axioms, including near-identity increments.
inline std::vector<CheckResult> box_axiom_checks(std::size_t samples, std::uint64_t seed,
                                                 double tol = 1e-9) {
  Rng rng(seed);
  double e_zero = 0.0, e_roundtrip = 0.0, e_closure = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const Orientationd q1 = rng.orientation();
    const Orientationd q2 = rng.orientation();
    Vec3 phi = rng.ball(M_PI - 1e-3);
    if (i % 4 == 1) phi = 1e-12 * phi.normalized();
    if (i % 4 == 2) phi = 1e-8 * phi.normalized();
    if (i % 4 == 3) phi = 1e-5 * phi.normalized();
    e_zero = std::max(e_zero, orientation_distance(boxplus(q1, Vec3(Vec3::Zero())), q1));
    e_roundtrip = std::max(e_roundtrip, (boxminus(boxplus(q1, phi), q1) - phi).norm());
    e_closure = std::max(e_closure, orientation_distance(boxplus(q1, Vec3(boxminus(q2, q1))), q2));
  }
  return {
      detail::make_result("boxplus zero axiom", samples, e_zero, tol),
      detail::make_result("boxplus/boxminus roundtrip", samples, e_roundtrip, tol),
      detail::make_result("boxminus/boxplus closure", samples, e_closure, tol),
  };
}

/// The analytic derivative catalog against central finite differences.
inline std::vector<CheckResult> derivative_checks(std::size_t samples, std::uint64_t seed,
                                                  double tol = 1e-5) {
  Rng rng(seed);
  const DiffConfig cfg;
  double e_dr = 0.0, e_dori = 0.0, e_inv = 0.0, e_c1 = 0.0, e_c2 = 0.0, e_exp = 0.0, e_log = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const Orientationd q = rng.orientation();
    const Orientationd q2 = rng.orientation();
    const Vec3 r = rng.ball(2.0);
    const Vec3 phi = rng.ball(3.0);
    const Orientationd q_log = exp(Vec3(rng.ball(M_PI - 0.1)));

    Mat3 fd;
    for (int j = 0; j < 3; ++j) {
      const Vec3 d = cfg.step * Vec3::Unit(j);
      fd.col(j) = (rotate(q, Vec3(r + d)) - rotate(q, Vec3(r - d))) / (2.0 * cfg.step);
    }
    e_dr = std::max(e_dr, (d_rotate_d_vector(q) - fd).cwiseAbs().maxCoeff());

    const auto rot_of_q = [&](const Orientationd& p) -> Eigen::VectorXd {
      return rotate(p, r);
    };
    e_dori = std::max(
        e_dori, (d_rotate_d_orientation(q, r) - numeric_diff_from_manifold(rot_of_q, q, cfg))
                    .cwiseAbs()
                    .maxCoeff());

    e_inv = std::max(
        e_inv,
        (d_inverse(q) -
         numeric_diff_manifold_to_manifold([](const Orientationd& p) { return inverse(p); }, q,
                                           cfg))
            .cwiseAbs()
            .maxCoeff());

    e_c1 = std::max(
        e_c1, (d_compose_left(q, q2) -
               numeric_diff_manifold_to_manifold(
                   [&](const Orientationd& p) { return compose(p, q2); }, q, cfg))
                  .cwiseAbs()
                  .maxCoeff());

    e_c2 = std::max(
        e_c2, (d_compose_right(q) -
               numeric_diff_manifold_to_manifold(
                   [&](const Orientationd& p) { return compose(q, p); }, q2, cfg))
                  .cwiseAbs()
                  .maxCoeff());

    e_exp = std::max(
        e_exp,
        (d_exp(phi) -
         numeric_diff_vector_to_manifold([](const Vec3& x) { return exp(x); }, phi, cfg))
            .cwiseAbs()
            .maxCoeff());

    const auto log_of_q = [](const Orientationd& p) -> Eigen::VectorXd { return log(p); };
    e_log = std::max(
        e_log,
        (d_log(q_log) - numeric_diff_from_manifold(log_of_q, q_log, cfg)).cwiseAbs().maxCoeff());
  }
  return {
      detail::make_result("d(map)/d(vector) vs finite differences", samples, e_dr, tol),
      detail::make_result("d(map)/d(orientation) vs finite differences", samples, e_dori, tol),
      detail::make_result("d(inverse) vs finite differences", samples, e_inv, tol),
      detail::make_result("d(compose)/d(left) vs finite differences", samples, e_c1, tol),
      detail::make_result("d(compose)/d(right) vs finite differences", samples, e_c2, tol),
      detail::make_result("d(exp) vs finite differences", samples, e_exp, tol),
      detail::make_result("d(log) vs finite differences", samples, e_log, tol),
  };
}

/// Time derivative of orientation trajectories: the difference quotient of
/// t -> Phi_BI(t) must equal minus the body angular velocity.
inline CheckResult time_derivative_check(double tol = 1e-4) {
  double worst = 0.0;
  std::size_t n = 0;
  for (const TrajectoryKind kind :
       {TrajectoryKind::constant_twist, TrajectoryKind::circle, TrajectoryKind::sinusoid_mix}) {
    TrajectorySpec spec;
    spec.kind = kind;
    spec.duration = 10.0;
    for (int i = 0; i <= 20; ++i) {
      const double t = 0.5 * i;
      const auto body_from_inertial = [&](double tau) {
        return inverse(eval_trajectory(spec, tau).q);
      };
      const Vec3 fd = numeric_diff_to_manifold(body_from_inertial, t);
      worst = std::max(worst, (fd + eval_trajectory(spec, t).w_b).norm());
      ++n;
    }
  }
  return detail::make_result("time derivative equals -omega along trajectories", n, worst, tol);
}

inline CheckResult adjoint_identity_check(std::size_t samples, std::uint64_t seed,
                                          double tol = 1e-9) {
  Rng rng(seed);
  double worst = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    worst = std::max(worst, adjoint_check(rng.orientation(), rng.ball(3.0)));
  }
  return detail::make_result("adjoint identity", samples, worst, tol);
}

inline CheckResult gamma_product_check(std::size_t samples, std::uint64_t seed, double tol = 1e-8) {
  Rng rng(seed);
  double worst = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const Vec3 phi = rng.ball(M_PI - 0.1);
    worst = std::max(
        worst, (gamma_inverse(phi) * gamma(phi) - Mat3::Identity()).cwiseAbs().maxCoeff());
  }
  return detail::make_result("gamma_inverse * gamma = I", samples, worst, tol);
}

/// First-order convergence of the log-additivity limit: the residual must
/// shrink by 5x-20x per decade of epsilon. Reported error is the worst
/// distance of any decade ratio from that band (0 when all are inside).
inline CheckResult log_additivity_check(std::size_t samples, std::uint64_t seed) {
  Rng rng(seed);
  const std::vector<double> eps = {1e-2, 1e-3, 1e-4};
  double worst = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const auto [phi1, phi2] = detail::generic_pair(rng);
    const std::vector<double> res = log_additivity_limit(phi1, phi2, eps);
    for (std::size_t j = 0; j + 1 < res.size(); ++j) {
      const double ratio = res[j] / res[j + 1];
      if (ratio < 5.0) worst = std::max(worst, 5.0 - ratio);
      if (ratio > 20.0) worst = std::max(worst, ratio - 20.0);
    }
  }
  return detail::make_result("log additivity limit, first-order decay", samples, worst, 0.0);
}

inline std::vector<CheckResult> run_all_checks(std::size_t samples, std::uint64_t seed) {
  std::vector<CheckResult> all;
  const std::size_t n_deriv = std::max<std::size_t>(samples / 5, 20);
  const std::size_t n_limit = std::max<std::size_t>(samples / 10, 10);
  for (auto&& group :
       {consistency_checks(samples, derive_seed(seed, 10)),
        box_axiom_checks(samples, derive_seed(seed, 11)),
        derivative_checks(n_deriv, derive_seed(seed, 12))}) {
    all.insert(all.end(), group.begin(), group.end());
  }
  all.push_back(time_derivative_check());
  all.push_back(adjoint_identity_check(samples, derive_seed(seed, 13)));
  all.push_back(gamma_product_check(std::max<std::size_t>(samples / 2, 20), derive_seed(seed, 14)));
  all.push_back(log_additivity_check(n_limit, derive_seed(seed, 15)));
  return all;
}

inline bool all_passed(const std::vector<CheckResult>& results) {
  return std::all_of(results.begin(), results.end(),
                     [](const CheckResult& r) { return r.passed; });
}

inline std::string format_check_table(const std::vector<CheckResult>& results) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-52s %8s %12s %10s %6s\n", "check", "samples", "max_error",
                "tol", "state");
  out += line;
  out += std::string(92, '-') + "\n";
  for (const CheckResult& r : results) {
    std::snprintf(line, sizeof(line), "%-52s %8zu %12.3e %10.1e %6s\n", r.name.c_str(), r.samples,
                  r.max_error, r.tolerance, r.passed ? "PASS" : "FAIL");
    out += line;
  }
  return out;
}

}  // namespace so3kit
