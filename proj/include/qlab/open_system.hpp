#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "qlab/pauli.hpp"
#include "qlab/state.hpp"

namespace qlab {

/// Dense row-major density matrix; same basis ordering as StateVector.
class DensityMatrix {
public:
  DensityMatrix() = default;
  explicit DensityMatrix(int n_qubits);  // |0..0><0..0|
  static DensityMatrix from_pure(const StateVector& psi);

  int n_qubits() const { return n_; }
  std::size_t dim() const { return dim_; }
  cplx& operator()(std::size_t a, std::size_t b) { return data_[a * dim_ + b]; }
  const cplx& operator()(std::size_t a, std::size_t b) const { return data_[a * dim_ + b]; }
  std::span<cplx> row(std::size_t a) { return {data_.data() + a * dim_, dim_}; }
  std::span<const cplx> data() const { return data_; }
  std::span<cplx> data() { return data_; }

  cplx trace() const;
  double hermiticity_error() const;  // max |rho_ab - conj(rho_ba)|
  double min_eigenvalue() const;
  /// <psi|rho|psi>.
  double fidelity(const StateVector& psi) const;

  void transpose_in_place();

private:
  int n_ = 0;
  std::size_t dim_ = 0;
  std::vector<cplx> data_;
};

/// Collapse operators C_j = gamma * sigma^-_j, sigma^- = |0><1|, on `sites`
/// (all sites when empty). |1> is the excited level; its population decays
/// at rate gamma^2.
struct DampingSpec {
  double gamma = 0.0;
  std::vector<int> sites;
};

inline constexpr double default_lindblad_dt = 1e-3;

/// RK4 integration of d rho/dt = -i[H, rho] + sum_j (C rho C^+ - {C^+C, rho}/2)
/// for time t. The step is shrunk to t / ceil(t / dt). Throws
/// std::runtime_error when the trace drifts by more than 1e-6.
DensityMatrix lindblad_evolve(const DensityMatrix& rho, const WeightedPauliSum& h,
                              const DampingSpec& damping, double t,
                              double dt = default_lindblad_dt);

/// rho <- U rho U^+ with U = exp(-i angle G).
void apply_layer(DensityMatrix& rho, const LayerGenerator& gen, double angle);

struct DampedGhzResult {
  double infidelity = 0.0;
  double trace_error = 0.0;
  double hermiticity_error = 0.0;
  double min_eigenvalue = 0.0;
};

/// Fixed-parameter cross GHZ circuit with each ZZ layer evolved for a time
/// equal to its angle under damping, X layers instantaneous.
DampedGhzResult damped_ghz_run(double gamma, int m = 1, double dt = default_lindblad_dt);

struct PowerLawFit {
  double exponent = 0.0;
  double prefactor = 0.0;
  double r_squared = 0.0;
};

/// Least squares of log y on log x. Needs >= 3 points, all positive.
PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y);

}  // namespace qlab
