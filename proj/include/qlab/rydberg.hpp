#pragma once

#include <optional>
#include <vector>

#include "qlab/ansatz.hpp"
#include "qlab/lattice.hpp"

namespace qlab {

/// Atoms with dressed interactions V0 Rc^6 / (r^6 + Rc^6). Units: hbar = 1,
/// lengths in whatever unit `positions` and `rc` share.
struct DressedAtomArray {
  std::vector<Position> positions;
  std::vector<int> species;  // site_class::type1 / type2
  double v0 = 1.0;
  double rc = 1.0;

  int size() const { return static_cast<int>(positions.size()); }
  void validate() const;
};

/// V0 = Omega^4 / (8 delta^3).
double dressed_v0(double rabi, double detuning);
/// Rc = |C6 / (2 delta)|^(1/6).
double dressed_rc(double c6, double detuning);

double dressed_coupling(const DressedAtomArray& array, int i, int j);

/// Echo element: free dressed evolution for `duration`, or a global
/// X_{pi/2} = exp(-i pi/2 sum X) pulse.
struct EchoElement {
  enum class Kind { dressed, x_pulse };
  Kind kind = Kind::dressed;
  double duration = 0.0;
};

/// dressed(g/2), X, dressed(g/2), X in time order.
std::vector<EchoElement> echo_sequence(double gamma);

struct EchoResult {
  std::vector<Edge> pairs;            // all i < j
  std::vector<double> zz_angles;      // gamma V_ij / 4 per pair
  std::optional<double> deviation;    // operator-norm distance, n <= 6 only
};

inline constexpr int echo_dense_max_atoms = 6;

/// Effective ZZ angles of the echo and, for small arrays, the distance
/// min_phi ||U_echo - e^{i phi} U_ZZ(gamma)||_2.
EchoResult echo_to_ising(const DressedAtomArray& array, double gamma);

/// Cross of 5 + 4m atoms on a plus sign with pitch `spacing`; the centre is
/// the only type-2 atom.
DressedAtomArray cross_lattice_positions(int m, double spacing);

struct CouplingClasses {
  std::vector<Edge> pairs;
  std::vector<int> classes;  // edge_class values
  int count = 0;
};

/// Groups pairs within `cutoff` by (species pair, distance): pairs touching a
/// type-2 atom are J1, the shortest type-1 pairs J2, longer type-1 pairs J0.
CouplingClasses classify_couplings(const DressedAtomArray& array, double cutoff);

/// Lattice built from an atom array's coupling classes (for the ansatz).
LatticeGeometry geometry_from_array(const DressedAtomArray& array, double cutoff);

struct RydbergProtocol {
  CircuitSpec circuit;
  ParameterVector params;
  double fidelity = 0.0;
  DressedAtomArray array;
};

/// Fixed-parameter GHZ protocol on the cross array: fields on type-1 atoms
/// only, couplings (J0, J1, J2) = (4/3, 1, 1/3).
RydbergProtocol rydberg_ghz_protocol(int m);

}  // namespace qlab
