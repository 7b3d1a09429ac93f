#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qlab/lattice.hpp"
#include "qlab/pauli.hpp"

namespace qlab {

enum class ModelKind { tfim, random_ising, heisenberg, ferro_ising };

struct ModelParams {
  /// Transverse-field strength (tfim).
  double lambda = 1.0;
  /// Disorder strength D in [0, 2] (random_ising).
  double disorder = 0.0;
  std::optional<std::uint64_t> seed;
  /// Disorder sample index; selects an independent random stream per seed.
  std::uint64_t sample = 0;
};

/// Ising-type coefficient magnitudes: H = -sum_e J_e ZZ - sum_i h_i X.
struct IsingWeights {
  std::vector<double> fields;     // h_i, one per site
  std::vector<double> couplings;  // J_e, one per geometry edge
};

/// Builds the model Hamiltonian with its explicit signs folded into the
/// coefficients. Ising families list ZZ terms (edge order) before X terms.
WeightedPauliSum build_hamiltonian(ModelKind model, const LatticeGeometry& geometry,
                                   const ModelParams& params = {});

/// Random-Ising couplings and fields, each uniform on [(2-D)/2, (2+D)/2].
/// Draw order: one value per edge, then one per site, from the stream keyed
/// by (seed, sample).
IsingWeights draw_random_ising_weights(const LatticeGeometry& geometry, double disorder,
                                       std::uint64_t seed, std::uint64_t sample);

WeightedPauliSum ising_hamiltonian(const LatticeGeometry& geometry,
                                   const IsingWeights& w);

/// Reads J_e, h_i back from an Ising-type Hamiltonian on `geometry`.
IsingWeights ising_weights_of(const WeightedPauliSum& h, const LatticeGeometry& geometry);

enum class SplitScheme { ising_m2, heisenberg_m4 };

struct HamiltonianSplit {
  std::vector<WeightedPauliSum> parts;
  std::vector<std::string> labels;

  WeightedPauliSum sum() const;
};

/// ising_m2 -> [x_field, zz]; heisenberg_m4 -> [even_xy, even_z, odd_xy, odd_z]
/// where "even" bonds are (0,1), (2,3), ... and "odd" bonds (1,2), (3,4), ...
/// plus the wrap bond (N-1, 0) under periodic boundaries.
HamiltonianSplit split_hamiltonian(const WeightedPauliSum& h, SplitScheme scheme);

std::string to_string(ModelKind m);
ModelKind model_kind_from_string(const std::string& s);

}  // namespace qlab
