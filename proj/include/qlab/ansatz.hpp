#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qlab/lattice.hpp"
#include "qlab/models.hpp"
#include "qlab/state.hpp"

namespace qlab {

enum class AnsatzScheme {
  conventional_ising,
  prh_ising,
  /// PRH Ising with one resource coupling per edge class (J0, J1, J2 on the
  /// cross) and unit fields on type-1 sites only.
  prh_ising_classes,
  conventional_heisenberg,
  prh_heisenberg,
};

/// One element weight: scale * (y_index < 0 ? 1 : y[y_index]).
struct WeightBinding {
  double scale = 1.0;
  int y_index = -1;
};

struct LayerTemplate {
  std::string label;
  LayerKind kind = LayerKind::x_field;
  std::vector<LayerGenerator::Element> supports;
  std::vector<WeightBinding> weights;
};

/// What a resource coordinate multiplies: a site field, an edge coupling,
/// or a whole coupling class. `a`, `b` are sites (b = -1 for fields).
struct ResourceCoordinate {
  enum class Kind { field, coupling, xy_coupling, z_coupling, coupling_class };
  Kind kind = Kind::field;
  int a = -1;
  int b = -1;
  std::string name;
};

/// Layer templates for one cycle plus the y layout. Layer j (0-based) is
/// U_{j+1}; inside a cycle U_M acts first and U_1 last, and cycle 1 acts
/// before cycle 2. x is stored cycle-major: x[n * M + j].
struct CircuitSpec {
  AnsatzScheme scheme = AnsatzScheme::conventional_ising;
  int n_qubits = 0;
  int depth = 1;
  std::vector<LayerTemplate> layers;
  std::vector<ResourceCoordinate> resources;
  /// y at which the circuit reproduces the target-Hamiltonian layers.
  std::vector<double> resource_reference;
  InitialState initial_state = InitialState::plus_product;

  int layers_per_cycle() const { return static_cast<int>(layers.size()); }
  std::size_t x_size() const { return layers.size() * static_cast<std::size_t>(depth); }
  std::size_t y_size() const { return resources.size(); }

  LayerGenerator bind(std::size_t layer, std::span<const double> y) const;
};

struct ParameterVector {
  std::vector<double> x;
  std::vector<double> y;

  std::vector<double> flat() const;
  static ParameterVector from_flat(std::span<const double> flat, std::size_t x_size);
};

/// Target-inherited weights for Ising schemes; defaults to unit fields and
/// couplings. Required for conventional circuits on disordered targets.
struct AnsatzOptions {
  std::optional<IsingWeights> target_weights;
  bool target_is_disordered = false;
};

CircuitSpec build_ansatz(const LatticeGeometry& geometry, AnsatzScheme scheme, int depth,
                         const AnsatzOptions& options = {});

void check_layout(const CircuitSpec& circuit, const ParameterVector& params);

/// U(x, y)|psi0>.
StateVector run_circuit(const CircuitSpec& circuit, const ParameterVector& params);

/// Extra rotation exp(-i angle P) right after the layer that consumes
/// x[x_index], where P is one unit-weight Pauli term of that layer:
/// element `element`, sub-term `sub` (0 for XX, 1 for YY on xy_pair).
struct TermInsertion {
  std::size_t x_index = 0;
  std::size_t element = 0;
  int sub = 0;
  double angle = 0.0;
};

StateVector run_circuit(const CircuitSpec& circuit, const ParameterVector& params,
                        const TermInsertion& insertion);

/// Unit-weight Pauli terms behind one layer element (1 or 2 strings).
std::vector<PauliString> element_terms(const LayerTemplate& layer, std::size_t element,
                                       int n);

/// Cross circuit of depth m + 1 on 5 + 4m qubits with J0/J1/J2 classes.
CircuitSpec cross_ghz_circuit(int m);

/// Fixed GHZ parameters for the cross circuit, m in {1, 2, 3}. The published
/// angle lists are grouped by layer (all U1 angles, then all U2 angles);
/// they are re-laid out cycle-major here.
ParameterVector fixed_ghz_cross_params(int m);

/// Published angle list for m, in its original grouping.
std::vector<double> published_cross_angles(int m);

struct Gate {
  std::string name;  // "CNOT", "RZ", "RX", "I"
  std::vector<int> qubits;
  double angle = 0.0;
};

/// Digital decomposition of an Ising-type circuit: ZZ(phi) elements become
/// CNOT, RZ(2 phi), CNOT; field elements become RX(2 theta w); zero-weight
/// elements become I.
std::vector<Gate> export_digital_circuit(const CircuitSpec& circuit,
                                         const ParameterVector& params);

StateVector simulate_gates(const std::vector<Gate>& gates, const StateVector& initial);

std::string to_string(AnsatzScheme s);
AnsatzScheme ansatz_scheme_from_string(const std::string& s);
bool is_prh(AnsatzScheme s);

}  // namespace qlab
