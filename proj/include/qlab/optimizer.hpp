#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "qlab/ansatz.hpp"
#include "qlab/lattice.hpp"
#include "qlab/oracle.hpp"

namespace qlab {

enum class Objective { infidelity, energy };
enum class GradientMode { central_difference, parameter_shift };

inline constexpr double finite_difference_step = 1e-6;

struct OptConfig {
  int max_iterations = 500;
  double gradient_tolerance = 1e-9;  // on the max-norm of the gradient
  double step_tolerance = 1e-12;     // on the max-norm of the accepted step
  int n_starts = 1;
  /// y starts at its reference value plus uniform noise of this half-width.
  double init_scale = 0.1;
  /// x starts uniform in [-x_init_scale, x_init_scale].
  double x_init_scale = 1.0;
  std::uint64_t seed = 0;
  GradientMode gradient_mode = GradientMode::central_difference;
  /// Stop a start once its cost falls to this value.
  std::optional<double> stop_at_cost;
  /// Worker cap for independent starts; 0 means LAB_THREADS or hardware.
  int threads = 0;
};

struct OptResult {
  ParameterVector best_params;
  double best_cost = 0.0;
  double final_gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string stop_reason;
  std::vector<double> per_start_costs;
  int best_start = 0;
  /// Accepted costs of the best start, initial point first.
  std::vector<double> cost_history;
  long evaluations = 0;
};

/// Cost over circuit parameters: 1 - |<target|psi>|^2 or <psi|H|psi>.
class CircuitCost {
public:
  using Target = std::variant<StateVector, GroundStateResult, WeightedPauliSum>;

  CircuitCost(CircuitSpec circuit, Objective objective, const Target& target);

  double operator()(const ParameterVector& p) const;
  double of_state(const StateVector& psi) const;

  /// Fidelity with the reference state (the target for infidelity runs, or
  /// one set by with_reference for energy runs).
  std::optional<double> fidelity(const ParameterVector& p) const;
  CircuitCost& with_reference(const StateVector& ref);

  const CircuitSpec& circuit() const { return *circuit_; }
  Objective objective() const { return objective_; }

private:
  std::shared_ptr<const CircuitSpec> circuit_;
  Objective objective_;
  std::optional<StateVector> target_state_;
  std::optional<WeightedPauliSum> hamiltonian_;
};

CircuitCost make_cost(const CircuitSpec& circuit, Objective objective,
                      const CircuitCost::Target& target);

/// Gradient over flat (x, y). parameter_shift covers x only and throws
/// std::invalid_argument when the circuit has y coordinates.
std::vector<double> gradient(const CircuitCost& cost, const ParameterVector& params,
                             GradientMode mode);

// Flat problem interface used by the quasi-Newton core.
using CostFn = std::function<double(std::span<const double>)>;
using GradFn = std::function<void(std::span<const double>, std::span<double>)>;

struct FlatResult {
  std::vector<double> x;
  double cost = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string stop_reason;
  std::vector<double> history;
  long evaluations = 0;
};

/// BFGS with a strong-Wolfe line search. `grad` may be empty, in which case
/// central differences are used.
FlatResult bfgs(const CostFn& f, const GradFn& grad, std::vector<double> x0,
                const OptConfig& config);

OptResult minimize(const CircuitCost& cost, const ParameterVector& init,
                   const OptConfig& config);

/// Independent starts (optionally the first from `warm`); best retained.
OptResult multistart_minimize(const CircuitCost& cost, const OptConfig& config,
                              const std::optional<ParameterVector>& warm = std::nullopt);

/// Initial point of start `k` as drawn by multistart_minimize.
ParameterVector draw_start(const CircuitSpec& circuit, const OptConfig& config, int k);

struct SymmetryReport {
  std::vector<std::string> names;       // one per group element
  std::vector<double> deviations;       // rms(y - y o g)
  std::vector<double> symmetrized_y;    // group average of y
  double cost = 0.0;
  double symmetrized_cost = 0.0;
  double cost_change() const { return symmetrized_cost - cost; }
};

/// Resource-coordinate permutation induced by a site permutation; throws when
/// the permutation does not map resources onto resources.
std::vector<int> resource_permutation(const CircuitSpec& circuit, const Permutation& sites);

SymmetryReport symmetry_report(const ParameterVector& params, const CircuitCost& cost,
                               const LatticeGeometry& geometry);

/// Worker count from LAB_THREADS (when set and positive) or the hardware.
int worker_count(int requested = 0);

/// Runs fn(i) for i in [0, n) on up to `workers` threads. Exceptions are
/// rethrown on the calling thread (the lowest index wins).
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

std::string to_string(Objective o);
Objective objective_from_string(const std::string& s);
std::string to_string(GradientMode g);
GradientMode gradient_mode_from_string(const std::string& s);

}  // namespace qlab
