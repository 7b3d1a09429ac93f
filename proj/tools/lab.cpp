// lab: command-line front end for experiments and acceptance checks.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "qlab/checks.hpp"
#include "qlab/experiments.hpp"
#include "qlab/open_system.hpp"
#include "qlab/oracle.hpp"
#include "qlab/rydberg.hpp"

namespace {

constexpr int exit_config = 2;
constexpr int exit_threshold = 3;

int cmd_run(const std::string& path, const std::string& output_override) {
  qlab::ExperimentConfig cfg;
  try {
    std::ifstream is(path);
    if (!is) throw qlab::ConfigError("cannot open config " + path);
    qlab::json j;
    try {
      j = qlab::json::parse(is);
    } catch (const qlab::json::parse_error& e) {
      throw qlab::ConfigError(std::string("malformed JSON: ") + e.what());
    }
    cfg = qlab::parse_config(j);
    if (!output_override.empty()) cfg.output = output_override;
  } catch (const qlab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config;
  }
  const auto out = qlab::run_experiment(cfg);
  qlab::write_outputs(cfg, out);
  std::cout << "wrote " << cfg.output << " (" << out.records.size() << " records)\n";
  return 0;
}

int cmd_check(const std::string& suite) {
  std::vector<qlab::CheckResult> res;
  try {
    res = qlab::run_suite(suite, std::cout);
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return exit_config;
  }
  int failed = 0;
  for (const auto& r : res) failed += r.passed ? 0 : 1;
  std::cout << res.size() - failed << "/" << res.size() << " passed\n";
  return failed ? exit_threshold : 0;
}

int cmd_rydberg(int m) {
  const auto proto = qlab::rydberg_ghz_protocol(m);
  const auto echo = qlab::echo_to_ising(proto.array, 1.0);
  std::printf("m=%d N=%d p=%d 1-f=%.3e\n", m, proto.circuit.n_qubits, proto.circuit.depth,
              1.0 - proto.fidelity);
  if (echo.deviation) std::printf("echo deviation %.3e\n", *echo.deviation);
  return 1.0 - proto.fidelity <= 1e-10 ? 0 : exit_threshold;
}

int cmd_lindblad(const std::vector<double>& gammas, double dt) {
  std::vector<double> inf(gammas.size());
  qlab::parallel_for(gammas.size(), qlab::worker_count(), [&](std::size_t i) {
    inf[i] = qlab::damped_ghz_run(gammas[i], 1, dt).infidelity;
  });
  std::printf("gamma,infidelity\n");
  for (std::size_t i = 0; i < gammas.size(); ++i) std::printf("%.17g,%.17g\n", gammas[i], inf[i]);
  if (gammas.size() >= 3) {
    const auto fit = qlab::fit_power_law(gammas, inf);
    std::printf("# exponent %.4f prefactor %.4g r2 %.6f\n", fit.exponent, fit.prefactor, fit.r_squared);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lab: variational state preparation experiments"};
  app.require_subcommand(1);

  std::string config_path, output;
  auto* run = app.add_subcommand("run", "run an experiment from a JSON config");
  run->add_option("config", config_path, "config file")->required();
  run->add_option("-o,--output", output, "override the CSV output path");

  std::string suite = "acceptance";
  auto* check = app.add_subcommand("check", "run acceptance checks");
  check->add_option("suite", suite, "acceptance | fast | slow | <check name>");

  int m = 1;
  auto* ryd = app.add_subcommand("rydberg-check", "fixed-parameter Rydberg GHZ protocol on the cross");
  ryd->add_option("-m", m, "arm length")->check(CLI::Range(1, 3));

  std::vector<double> gammas{3e-3, 5e-3, 7e-3, 1e-2, 2e-2, 3e-2};
  double dt = qlab::default_lindblad_dt;
  auto* lind = app.add_subcommand("lindblad", "damped GHZ infidelity sweep");
  lind->add_option("--gammas", gammas, "damping rates")->delimiter(',')->check(CLI::PositiveNumber);
  lind->add_option("--dt", dt, "RK4 step")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : exit_config;
  }

  try {
    if (*run) return cmd_run(config_path, output);
    if (*check) return cmd_check(suite);
    if (*ryd) return cmd_rydberg(m);
    if (*lind) return cmd_lindblad(gammas, dt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
