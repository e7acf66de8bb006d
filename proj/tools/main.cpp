#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "so3kit/checks.hpp"
#include "so3kit/config.hpp"
#include "so3kit/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitIoError = 3;

int run_check(std::size_t samples, std::uint64_t seed) {
  const auto results = so3kit::run_all_checks(samples, seed);
  std::cout << so3kit::format_check_table(results);
  if (!so3kit::all_passed(results)) {
    std::cout << "FAILED\n";
    return kExitCheckFailure;
  }
  std::cout << "all checks passed\n";
  return kExitOk;
}

int run_simulate(const std::string& config_path, bool seed_set, std::uint64_t seed,
                 const std::string& out_dir) {
  so3kit::RunConfig cfg;
  if (!config_path.empty()) {
    cfg = so3kit::load_config(config_path);
  }
  if (seed_set) cfg.seed = seed;
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  cfg.validate();

  const so3kit::ExperimentResult result = so3kit::run_experiment(cfg);
  so3kit::write_experiment(result, cfg.out_dir);
  std::cout << so3kit::summary_line(result) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SO(3) orientation calculus and IMU-driven error-state EKF harness"};
  app.require_subcommand(1);

  std::size_t samples = 1000;
  std::uint64_t seed = 42;
  std::string config_path;
  std::string out_dir;

  CLI::App* check = app.add_subcommand(
      "check-identities", "run the orientation/derivative consistency suite");
  check->add_option("--samples", samples, "random samples per check");
  check->add_option("--seed", seed, "random seed");

  CLI::App* simulate = app.add_subcommand(
      "simulate", "simulate a trajectory and run the error-state filter over it");
  simulate->add_option("--config", config_path, "configuration file")
      ->envname("SO3KIT_CONFIG");
  CLI::Option* seed_opt = simulate->add_option("--seed", seed, "random seed (overrides config)");
  simulate->add_option("--out", out_dir, "output directory (overrides config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (check->parsed()) {
      return run_check(samples, seed);
    }
    return run_simulate(config_path, seed_opt->count() > 0, seed, out_dir);
  } catch (const so3kit::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const so3kit::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIoError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCheckFailure;
  }
}
