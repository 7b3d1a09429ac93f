#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "qlab/pauli.hpp"

namespace qlab {

using cplx = std::complex<double>;

/// Dense pure state on n qubits. Basis index bits follow qubit_mask():
/// qubit 0 is the most significant bit.
class StateVector {
public:
  StateVector() = default;
  explicit StateVector(int n_qubits);  // |0...0>
  StateVector(int n_qubits, std::vector<cplx> amplitudes);

  static StateVector basis(int n_qubits, std::uint64_t index);

  int n_qubits() const { return n_; }
  std::size_t dim() const { return amps_.size(); }

  std::span<const cplx> amplitudes() const { return amps_; }
  std::span<cplx> amplitudes() { return amps_; }
  const cplx& operator[](std::size_t i) const { return amps_[i]; }
  cplx& operator[](std::size_t i) { return amps_[i]; }

  double norm() const;
  void normalize();

  friend bool operator==(const StateVector&, const StateVector&) = default;

private:
  int n_ = 0;
  std::vector<cplx> amps_;
};

inline constexpr int max_state_qubits = 24;

enum class InitialState { plus_product, singlet_product };

/// plus_product: |+>^n. singlet_product: (|01> - |10>)/sqrt2 on (0,1), (2,3), ...
StateVector prepare_initial(InitialState kind, int n);

enum class LayerKind { zz_diagonal, x_field, xy_pair, z_pair };

/// A sum of mutually commuting weighted Paulis, G = sum_k w_k P_k.
/// zz_diagonal / z_pair: P_k = Z_a Z_b; x_field: P_k = X_a (b unused);
/// xy_pair: P_k = X_a X_b + Y_a Y_b on pairwise-disjoint pairs.
struct LayerGenerator {
  struct Element {
    int a = 0;
    int b = -1;
  };
  LayerKind kind = LayerKind::x_field;
  std::vector<Element> supports;
  std::vector<double> weights;

  bool is_diagonal() const {
    return kind == LayerKind::zz_diagonal || kind == LayerKind::z_pair;
  }
};

/// Checks supports against n and the commuting-layer contract.
void validate_layer(const LayerGenerator& gen, int n);

/// G written out as a Pauli sum.
WeightedPauliSum generator_operator(const LayerGenerator& gen, int n);

/// Diagonal of a zz_diagonal / z_pair generator, d[b] = sum_k w_k z_a(b) z_b(b).
std::vector<double> diagonal_of(const LayerGenerator& gen, int n);

/// state <- exp(-i angle G) state.
void apply_layer(StateVector& state, const LayerGenerator& gen, double angle);

/// state <- exp(-i phi P) for a unit-weight Pauli string P.
void apply_pauli_rotation(StateVector& state, const PauliString& p, double phi);

/// state <- exp(-i angle diag) state, with diag from diagonal_of().
void apply_diagonal(StateVector& state, std::span<const double> diag, double angle);

// Digital gates used by exported circuits.
void apply_rx(StateVector& state, int q, double angle);  // exp(-i angle X / 2)
void apply_rz(StateVector& state, int q, double angle);  // exp(-i angle Z / 2)
void apply_cnot(StateVector& state, int control, int target);

/// Unchecked in-place kernels on raw amplitude spans of length 2^n; callers
/// validate. Used for rows of density matrices as well as pure states.
namespace kernels {
void layer(std::span<cplx> amps, int n, const LayerGenerator& gen, double angle);
void diagonal(std::span<cplx> amps, std::span<const double> diag, double angle);
}  // namespace kernels

/// H|psi> for a Pauli sum.
StateVector apply_pauli_sum(const WeightedPauliSum& h, const StateVector& state);

/// <psi|P|psi> for a single Pauli string, coefficient included.
cplx pauli_expectation(const StateVector& state, const PauliString& p);

/// Real <psi|H|psi>; throws std::runtime_error if the imaginary residue
/// exceeds 1e-8 relative to the coefficient scale.
double expectation(const StateVector& state, const WeightedPauliSum& h);

cplx inner_product(const StateVector& bra, const StateVector& ket);

/// |<target|state>|^2.
double overlap_fidelity(const StateVector& state, const StateVector& target);

/// <prod_i X_i>.
double parity_expectation(const StateVector& state);

/// Debug dump: u64 amplitude count, then interleaved re/im float64, all
/// little-endian.
void write_amplitudes(std::ostream& os, const StateVector& state);
StateVector read_amplitudes(std::istream& is);

}  // namespace qlab
