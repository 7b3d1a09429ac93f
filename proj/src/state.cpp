#include "qlab/state.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace qlab {

namespace {

void check_qubits(int n) {
  if (n < 1 || n > max_state_qubits) {
    throw std::invalid_argument("qubit count must be in [1, " +
                                std::to_string(max_state_qubits) + "], got " +
                                std::to_string(n));
  }
}

void check_qubit(int q, int n) {
  if (q < 0 || q >= n) {
    throw std::out_of_range("qubit " + std::to_string(q) + " out of range for n=" +
                            std::to_string(n));
  }
}

void check_same_dim(const StateVector& a, const StateVector& b) {
  if (a.n_qubits() != b.n_qubits()) {
    throw std::invalid_argument("state dimension mismatch: " + std::to_string(a.n_qubits()) +
                                " vs " + std::to_string(b.n_qubits()) + " qubits");
  }
}

// Sign (-1)^{popcount(b & z)} and phase i^{#Y} of P|b> = phase * sign |b ^ x>.
cplx y_phase(int y_count) {
  switch (y_count & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

void rotate_x(std::span<cplx> amps, std::uint64_t mask, double phi) {
  // exp(-i phi X) = cos(phi) - i sin(phi) X
  const double c = std::cos(phi), s = std::sin(phi);
  const cplx ms{0.0, -s};
  for (std::uint64_t i = 0; i < amps.size(); ++i) {
    if (i & mask) continue;
    const std::uint64_t j = i | mask;
    const cplx a = amps[i], b = amps[j];
    amps[i] = c * a + ms * b;
    amps[j] = c * b + ms * a;
  }
}

}  // namespace

StateVector::StateVector(int n_qubits) : n_(n_qubits) {
  check_qubits(n_qubits);
  amps_.assign(std::size_t{1} << n_qubits, cplx{0.0, 0.0});
  amps_[0] = 1.0;
}

StateVector::StateVector(int n_qubits, std::vector<cplx> amplitudes)
    : n_(n_qubits), amps_(std::move(amplitudes)) {
  check_qubits(n_qubits);
  if (amps_.size() != (std::size_t{1} << n_qubits)) {
    throw std::invalid_argument("amplitude count must be 2^n");
  }
}

StateVector StateVector::basis(int n_qubits, std::uint64_t index) {
  StateVector s(n_qubits);
  if (index >= s.dim()) throw std::out_of_range("basis index out of range");
  s.amps_[0] = 0.0;
  s.amps_[index] = 1.0;
  return s;
}

double StateVector::norm() const {
  double acc = 0.0;
  for (const auto& a : amps_) acc += std::norm(a);
  return std::sqrt(acc);
}

void StateVector::normalize() {
  const double nrm = norm();
  if (nrm == 0.0) throw std::runtime_error("cannot normalize a zero vector");
  for (auto& a : amps_) a /= nrm;
}

StateVector prepare_initial(InitialState kind, int n) {
  check_qubits(n);
  const std::size_t dim = std::size_t{1} << n;
  if (kind == InitialState::plus_product) {
    return StateVector(n, std::vector<cplx>(dim, cplx{std::pow(2.0, -0.5 * n), 0.0}));
  }
  if (n % 2 != 0) throw std::invalid_argument("singlet_product needs even n");
  // Basis states with each pair in {01, 10}; sign (-1)^{#pairs in 10}.
  std::vector<cplx> amps(dim, cplx{0.0, 0.0});
  const double mag = std::pow(2.0, -0.25 * n);
  for (std::uint64_t b = 0; b < dim; ++b) {
    int flips = 0;
    bool ok = true;
    for (int k = 0; k < n / 2 && ok; ++k) {
      const bool first = b & qubit_mask(2 * k, n);
      const bool second = b & qubit_mask(2 * k + 1, n);
      if (first == second) ok = false;
      if (first) ++flips;
    }
    if (ok) amps[b] = (flips % 2 == 0) ? mag : -mag;
  }
  return StateVector(n, std::move(amps));
}

void validate_layer(const LayerGenerator& gen, int n) {
  if (gen.supports.size() != gen.weights.size()) {
    throw std::invalid_argument("layer supports/weights length mismatch");
  }
  for (const auto& e : gen.supports) {
    check_qubit(e.a, n);
    if (gen.kind == LayerKind::x_field) continue;
    check_qubit(e.b, n);
    if (e.a == e.b) throw std::invalid_argument("two-site layer element with a == b");
  }
  if (gen.kind == LayerKind::xy_pair) {
    std::uint64_t used = 0;
    for (const auto& e : gen.supports) {
      const std::uint64_t m = qubit_mask(e.a, n) | qubit_mask(e.b, n);
      if (used & m) {
        throw std::invalid_argument("xy_pair layer supports overlap; terms would not commute");
      }
      used |= m;
    }
  }
}

WeightedPauliSum generator_operator(const LayerGenerator& gen, int n) {
  validate_layer(gen, n);
  WeightedPauliSum g(n);
  for (std::size_t k = 0; k < gen.supports.size(); ++k) {
    const auto& e = gen.supports[k];
    const double w = gen.weights[k];
    switch (gen.kind) {
      case LayerKind::x_field: g.add(PauliString::single(n, e.a, 'X', w)); break;
      case LayerKind::zz_diagonal:
      case LayerKind::z_pair: g.add(PauliString::pair(n, e.a, 'Z', e.b, 'Z', w)); break;
      case LayerKind::xy_pair:
        g.add(PauliString::pair(n, e.a, 'X', e.b, 'X', w));
        g.add(PauliString::pair(n, e.a, 'Y', e.b, 'Y', w));
        break;
    }
  }
  return g;
}

std::vector<double> diagonal_of(const LayerGenerator& gen, int n) {
  if (!gen.is_diagonal()) throw std::invalid_argument("layer is not diagonal");
  validate_layer(gen, n);
  const std::size_t dim = std::size_t{1} << n;
  std::vector<std::uint64_t> masks;
  masks.reserve(gen.supports.size());
  for (const auto& e : gen.supports) masks.push_back(qubit_mask(e.a, n) | qubit_mask(e.b, n));
  std::vector<double> d(dim, 0.0);
  for (std::uint64_t b = 0; b < dim; ++b) {
    double acc = 0.0;
    for (std::size_t k = 0; k < masks.size(); ++k) {
      // z_a z_b = +1 when the two bits agree.
      acc += (std::popcount(b & masks[k]) & 1) ? -gen.weights[k] : gen.weights[k];
    }
    d[b] = acc;
  }
  return d;
}

void apply_diagonal(StateVector& state, std::span<const double> diag, double angle) {
  if (diag.size() != state.dim()) throw std::invalid_argument("diagonal length mismatch");
  kernels::diagonal(state.amplitudes(), diag, angle);
}

void apply_layer(StateVector& state, const LayerGenerator& gen, double angle) {
  validate_layer(gen, state.n_qubits());
  kernels::layer(state.amplitudes(), state.n_qubits(), gen, angle);
}

void kernels::diagonal(std::span<cplx> amps, std::span<const double> diag, double angle) {
  if (angle == 0.0) return;
  for (std::size_t b = 0; b < amps.size(); ++b) {
    const double phi = -angle * diag[b];
    amps[b] *= cplx{std::cos(phi), std::sin(phi)};
  }
}

void kernels::layer(std::span<cplx> amps, int n, const LayerGenerator& gen, double angle) {
  if (angle == 0.0) return;
  switch (gen.kind) {
    case LayerKind::zz_diagonal:
    case LayerKind::z_pair: {
      const auto d = diagonal_of(gen, n);
      diagonal(amps, d, angle);
      return;
    }
    case LayerKind::x_field:
      for (std::size_t k = 0; k < gen.supports.size(); ++k) {
        rotate_x(amps, qubit_mask(gen.supports[k].a, n), angle * gen.weights[k]);
      }
      return;
    case LayerKind::xy_pair:
      // exp(-i phi (XX + YY)) rotates |01> <-> |10> by 2 phi.
      for (std::size_t k = 0; k < gen.supports.size(); ++k) {
        const auto ma = qubit_mask(gen.supports[k].a, n);
        const auto mb = qubit_mask(gen.supports[k].b, n);
        const double phi = 2.0 * angle * gen.weights[k];
        const double c = std::cos(phi);
        const cplx ms{0.0, -std::sin(phi)};
        for (std::uint64_t i = 0; i < amps.size(); ++i) {
          if ((i & ma) || !(i & mb)) continue;
          const std::uint64_t j = i ^ ma ^ mb;
          const cplx u = amps[i], v = amps[j];
          amps[i] = c * u + ms * v;
          amps[j] = c * v + ms * u;
        }
      }
      return;
  }
}

void apply_rx(StateVector& state, int q, double angle) {
  check_qubit(q, state.n_qubits());
  rotate_x(state.amplitudes(), qubit_mask(q, state.n_qubits()), 0.5 * angle);
}

void apply_rz(StateVector& state, int q, double angle) {
  check_qubit(q, state.n_qubits());
  const auto m = qubit_mask(q, state.n_qubits());
  const cplx up{std::cos(0.5 * angle), -std::sin(0.5 * angle)};
  const cplx down = std::conj(up);
  auto amps = state.amplitudes();
  for (std::uint64_t i = 0; i < amps.size(); ++i) amps[i] *= (i & m) ? down : up;
}

void apply_cnot(StateVector& state, int control, int target) {
  const int n = state.n_qubits();
  check_qubit(control, n);
  check_qubit(target, n);
  if (control == target) throw std::invalid_argument("cnot control equals target");
  const auto mc = qubit_mask(control, n), mt = qubit_mask(target, n);
  auto amps = state.amplitudes();
  for (std::uint64_t i = 0; i < amps.size(); ++i) {
    if ((i & mc) && !(i & mt)) std::swap(amps[i], amps[i | mt]);
  }
}

void apply_pauli_rotation(StateVector& state, const PauliString& p, double phi) {
  if (p.n_qubits() != state.n_qubits()) throw std::invalid_argument("pauli width mismatch");
  if (phi == 0.0) return;
  // exp(-i phi P) = cos(phi) - i sin(phi) P, P unit-weight.
  auto amps = state.amplitudes();
  const std::vector<cplx> in(amps.begin(), amps.end());
  const cplx ph = y_phase(p.y_count()) * cplx{0.0, -std::sin(phi)};
  const double c = std::cos(phi);
  const auto x = p.x_mask(), z = p.z_mask();
  for (std::uint64_t b = 0; b < in.size(); ++b) amps[b] = c * in[b];
  for (std::uint64_t b = 0; b < in.size(); ++b) {
    const cplx v = (std::popcount(b & z) & 1) ? -in[b] : in[b];
    amps[b ^ x] += ph * v;
  }
}

StateVector apply_pauli_sum(const WeightedPauliSum& h, const StateVector& state) {
  if (h.n_qubits() != state.n_qubits()) {
    throw std::invalid_argument("hamiltonian acts on " + std::to_string(h.n_qubits()) +
                                " qubits, state has " + std::to_string(state.n_qubits()));
  }
  std::vector<cplx> out(state.dim(), cplx{0.0, 0.0});
  const auto in = state.amplitudes();
  for (const auto& t : h.terms()) {
    const cplx ph = y_phase(t.y_count()) * t.coefficient();
    const auto x = t.x_mask(), z = t.z_mask();
    for (std::uint64_t b = 0; b < in.size(); ++b) {
      const cplx v = (std::popcount(b & z) & 1) ? -in[b] : in[b];
      out[b ^ x] += ph * v;
    }
  }
  return StateVector(state.n_qubits(), std::move(out));
}

cplx pauli_expectation(const StateVector& state, const PauliString& p) {
  if (p.n_qubits() != state.n_qubits()) throw std::invalid_argument("pauli width mismatch");
  const auto amps = state.amplitudes();
  const auto x = p.x_mask(), z = p.z_mask();
  cplx acc{0.0, 0.0};
  for (std::uint64_t b = 0; b < amps.size(); ++b) {
    const cplx v = (std::popcount(b & z) & 1) ? -amps[b] : amps[b];
    acc += std::conj(amps[b ^ x]) * v;
  }
  return acc * y_phase(p.y_count()) * p.coefficient();
}

double expectation(const StateVector& state, const WeightedPauliSum& h) {
  if (h.n_qubits() != state.n_qubits()) {
    throw std::invalid_argument("expectation: hamiltonian acts on " +
                                std::to_string(h.n_qubits()) + " qubits, state has " +
                                std::to_string(state.n_qubits()));
  }
  cplx acc{0.0, 0.0};
  double scale = 1.0;
  for (const auto& t : h.terms()) {
    acc += pauli_expectation(state, t);
    scale += std::abs(t.coefficient());
  }
  if (std::abs(acc.imag()) > 1e-8 * scale) {
    throw std::runtime_error("expectation has imaginary residue " +
                             std::to_string(acc.imag()) + "; operator or state is malformed");
  }
  return acc.real();
}

cplx inner_product(const StateVector& bra, const StateVector& ket) {
  check_same_dim(bra, ket);
  const auto a = bra.amplitudes(), b = ket.amplitudes();
  cplx acc{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

double overlap_fidelity(const StateVector& state, const StateVector& target) {
  const double f = std::norm(inner_product(target, state));
  return std::min(1.0, f);
}

double parity_expectation(const StateVector& state) {
  // prod X maps b to ~b with no phase.
  const auto amps = state.amplitudes();
  const std::uint64_t all = amps.size() - 1;
  cplx acc{0.0, 0.0};
  for (std::uint64_t b = 0; b < amps.size(); ++b) acc += std::conj(amps[b ^ all]) * amps[b];
  return std::clamp(acc.real(), -1.0, 1.0);
}

void write_amplitudes(std::ostream& os, const StateVector& state) {
  static_assert(std::endian::native == std::endian::little,
                "amplitude dump assumes a little-endian host");
  const std::uint64_t count = state.dim();
  os.write(reinterpret_cast<const char*>(&count), sizeof count);
  for (const auto& a : state.amplitudes()) {
    const double parts[2] = {a.real(), a.imag()};
    os.write(reinterpret_cast<const char*>(parts), sizeof parts);
  }
}

StateVector read_amplitudes(std::istream& is) {
  std::uint64_t count = 0;
  is.read(reinterpret_cast<char*>(&count), sizeof count);
  if (!is || count == 0 || !std::has_single_bit(count)) {
    throw std::runtime_error("malformed amplitude dump header");
  }
  const int n = std::countr_zero(count);
  std::vector<cplx> amps(count);
  for (auto& a : amps) {
    double parts[2];
    is.read(reinterpret_cast<char*>(parts), sizeof parts);
    a = {parts[0], parts[1]};
  }
  if (!is) throw std::runtime_error("truncated amplitude dump");
  return StateVector(n, std::move(amps));
}

}  // namespace qlab
