#pragma once

#include <optional>

#include "qlab/pauli.hpp"
#include "qlab/state.hpp"

namespace qlab {

enum class Sector { full, parity_plus };

/// automatic: dense up to dense_auto_max_qubits, Lanczos above.
enum class SolverMode { automatic, dense, lanczos };

inline constexpr int dense_max_qubits = 12;
inline constexpr int dense_auto_max_qubits = 10;
inline constexpr double degeneracy_threshold = 1e-9;

struct GroundStateResult {
  double energy = 0.0;
  StateVector state;
  std::optional<double> gap;  // E1 - E0 in the sector that produced `state`
  bool degenerate = false;    // full-space ground level is degenerate
  Sector sector = Sector::full;
  double residual = 0.0;      // ||H psi - E0 psi||
};

/// Lowest eigenpair of h. With Sector::full and a degenerate ground level the
/// search falls back to the +1 parity block (h must commute with prod X).
GroundStateResult exact_ground_state(const WeightedPauliSum& h,
                                     Sector sector = Sector::full,
                                     SolverMode mode = SolverMode::automatic);

/// (|0...0> + |1...1>)/sqrt2.
StateVector ghz_state(int n);

/// R = (f_prh - f_c) / (1 - f_c). Throws std::domain_error when f_c == 1.
double improvement_ratio(double f_conventional, double f_prh);

/// ||H psi - <H> psi||, used for eigenstate checks.
double eigen_residual(const WeightedPauliSum& h, const StateVector& psi, double energy);

}  // namespace qlab
