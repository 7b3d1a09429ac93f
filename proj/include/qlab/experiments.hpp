#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qlab/ansatz.hpp"
#include "qlab/io.hpp"
#include "qlab/lattice.hpp"
#include "qlab/models.hpp"
#include "qlab/optimizer.hpp"

namespace qlab {

enum class ExperimentKind { gs_sweep, ghz_sweep, disorder, lindblad, rydberg_check, heisenberg_sweep };

/// Bad or inconsistent experiment configuration.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::gs_sweep;
  GeometryKind geometry = GeometryKind::chain;
  std::vector<int> size;
  Boundary boundary = Boundary::open;
  /// Cross only: add the J0 couplings between neighbouring arms.
  bool inter_arm_edges = true;
  ModelKind model = ModelKind::tfim;
  double lambda = 1.0;
  double disorder = 0.0;
  std::vector<AnsatzScheme> arms;
  std::vector<int> depths;
  Objective objective = Objective::infidelity;
  OptConfig optimizer;
  int samples = 1;
  std::uint64_t seed = 1;
  /// ghz_sweep on the cross: evaluate the published parameters instead of optimising.
  bool fixed_parameters = false;
  std::vector<double> gammas;
  double dt = 1e-3;
  std::vector<int> ms;
  std::string output;  // CSV path; the JSON sidecar sits next to it
};

/// Validates and fills defaults. Throws ConfigError.
ExperimentConfig parse_config(const json& j);

struct ExperimentRecord {
  std::string experiment;
  std::string model;
  int n = 0;
  std::string boundary;
  int p = 0;
  int sample = 0;
  std::uint64_t seed = 0;
  std::string objective;
  std::string ansatz;
  double best_cost = 0.0;
  double fidelity = 0.0;
  std::optional<double> r;  // PRH rows of paired runs
  double wall_ms = 0.0;
  ParameterVector params;
  int iterations = 0;
  json extra;
};

struct ExperimentOutput {
  std::vector<ExperimentRecord> records;
  /// Lindblad sweeps use their own two-column CSV.
  std::string csv;
  json sidecar;
};

ExperimentOutput run_experiment(const ExperimentConfig& config);

inline const char* record_csv_header =
    "experiment,model,N,boundary,p,sample,seed,objective,ansatz,best_cost,fidelity,R,wall_ms";

std::string records_to_csv(const std::vector<ExperimentRecord>& records);

/// Writes config.output (CSV) and its .json sidecar atomically.
void write_outputs(const ExperimentConfig& config, const ExperimentOutput& out);

LatticeGeometry config_geometry(const ExperimentConfig& config);

std::string to_string(ExperimentKind k);
ExperimentKind experiment_kind_from_string(const std::string& s);

}  // namespace qlab
