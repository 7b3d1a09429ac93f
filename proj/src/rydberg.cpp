#include "qlab/rydberg.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "qlab/oracle.hpp"

namespace qlab {

void DressedAtomArray::validate() const {
  if (!(v0 > 0.0) || !(rc > 0.0)) throw std::invalid_argument("v0 and rc must be positive");
  if (species.size() != positions.size()) {
    throw std::invalid_argument("one species label per atom required");
  }
  for (std::size_t i = 0; i < positions.size(); ++i) {
    for (std::size_t j = i + 1; j < positions.size(); ++j) {
      if (positions[i] == positions[j]) throw std::invalid_argument("coincident atom positions");
    }
  }
}

double dressed_v0(double rabi, double detuning) {
  if (detuning == 0.0) throw std::invalid_argument("detuning must be non-zero");
  return std::pow(rabi, 4) / (8.0 * std::pow(detuning, 3));
}

double dressed_rc(double c6, double detuning) {
  if (detuning == 0.0) throw std::invalid_argument("detuning must be non-zero");
  return std::pow(std::abs(c6 / (2.0 * detuning)), 1.0 / 6.0);
}

double dressed_coupling(const DressedAtomArray& array, int i, int j) {
  if (i == j) throw std::invalid_argument("coupling needs two distinct atoms");
  const auto& a = array.positions.at(i);
  const auto& b = array.positions.at(j);
  const double r2 = (a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]);
  if (r2 == 0.0) throw std::invalid_argument("coincident atom positions");
  const double rc6 = std::pow(array.rc, 6);
  return array.v0 * rc6 / (r2 * r2 * r2 + rc6);
}

std::vector<EchoElement> echo_sequence(double gamma) {
  using K = EchoElement::Kind;
  return {{K::dressed, 0.5 * gamma}, {K::x_pulse, 0.0}, {K::dressed, 0.5 * gamma}, {K::x_pulse, 0.0}};
}

namespace {

using Mat = Eigen::MatrixXcd;

// exp(-i t sum V n n): diagonal, n = |1><1| per atom.
Mat dressed_unitary(const DressedAtomArray& array, double t) {
  const int n = array.size();
  const auto dim = static_cast<Eigen::Index>(1) << n;
  Mat u = Mat::Zero(dim, dim);
  for (Eigen::Index b = 0; b < dim; ++b) {
    double e = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if ((b & qubit_mask(i, n)) && (b & qubit_mask(j, n))) e += dressed_coupling(array, i, j);
      }
    }
    u(b, b) = std::polar(1.0, -t * e);
  }
  return u;
}

// exp(-i pi/2 sum X) = prod_i (-i X_i).
Mat x_pulse(int n) {
  const auto dim = static_cast<Eigen::Index>(1) << n;
  const cplx phase = std::pow(cplx{0.0, -1.0}, n);
  Mat u = Mat::Zero(dim, dim);
  for (Eigen::Index b = 0; b < dim; ++b) u(b ^ (dim - 1), b) = phase;
  return u;
}

}  // namespace

EchoResult echo_to_ising(const DressedAtomArray& array, double gamma) {
  array.validate();
  const int n = array.size();
  EchoResult r;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      r.pairs.push_back({i, j});
      r.zz_angles.push_back(gamma * dressed_coupling(array, i, j) / 4.0);
    }
  }
  if (n < 1 || n > echo_dense_max_atoms) return r;

  const auto dim = static_cast<Eigen::Index>(1) << n;
  Mat echo = Mat::Identity(dim, dim);
  for (const auto& el : echo_sequence(gamma)) {
    const Mat step = el.kind == EchoElement::Kind::x_pulse ? x_pulse(n) : dressed_unitary(array, el.duration);
    echo = step * echo;
  }
  Mat zz = Mat::Zero(dim, dim);
  for (Eigen::Index b = 0; b < dim; ++b) {
    double phase = 0.0;
    for (std::size_t k = 0; k < r.pairs.size(); ++k) {
      const auto [i, j] = r.pairs[k];
      const bool same = ((b & qubit_mask(i, n)) != 0) == ((b & qubit_mask(j, n)) != 0);
      phase += same ? r.zz_angles[k] : -r.zz_angles[k];
    }
    zz(b, b) = std::polar(1.0, -phase);
  }
  const cplx overlap = (zz.adjoint() * echo).trace();
  const cplx align = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : cplx{1.0, 0.0};
  const Mat diff = echo - align * zz;
  Eigen::JacobiSVD<Mat> svd(diff);
  r.deviation = svd.singularValues()[0];
  return r;
}

DressedAtomArray cross_lattice_positions(int m, double spacing) {
  if (!(spacing > 0.0)) throw std::invalid_argument("spacing must be positive");
  const auto g = build_geometry(GeometryKind::cross, {m}, Boundary::open);
  DressedAtomArray a;
  for (const auto& p : g.positions) a.positions.push_back({p[0] * spacing, p[1] * spacing});
  a.species = g.site_classes;
  a.rc = spacing;
  a.validate();
  return a;
}

CouplingClasses classify_couplings(const DressedAtomArray& array, double cutoff) {
  array.validate();
  const int n = array.size();
  struct Pair {
    int i, j;
    double d;
    bool type2;
  };
  std::vector<Pair> pairs;
  double shortest = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const auto& a = array.positions[i];
      const auto& b = array.positions[j];
      const double d = std::hypot(a[0] - b[0], a[1] - b[1]);
      if (d > cutoff * (1.0 + 1e-9)) continue;
      const bool t2 = array.species[i] == site_class::type2 || array.species[j] == site_class::type2;
      pairs.push_back({i, j, d, t2});
      if (!t2) shortest = std::min(shortest, d);
    }
  }
  CouplingClasses out;
  bool seen[3] = {false, false, false};
  // J1 edges first, then J2, then J0, each in site order.
  for (int pass : {edge_class::center_arm, edge_class::outer_arm, edge_class::inter_arm}) {
    for (const auto& p : pairs) {
      int cls;
      if (p.type2) {
        cls = edge_class::center_arm;
      } else if (p.d <= shortest * (1.0 + 1e-9)) {
        cls = edge_class::outer_arm;
      } else {
        cls = edge_class::inter_arm;
      }
      if (cls != pass) continue;
      out.pairs.push_back({p.i, p.j});
      out.classes.push_back(cls);
      seen[cls] = true;
    }
  }
  out.count = static_cast<int>(seen[0]) + seen[1] + seen[2];
  return out;
}

LatticeGeometry geometry_from_array(const DressedAtomArray& array, double cutoff) {
  const auto cc = classify_couplings(array, cutoff);
  LatticeGeometry g;
  g.kind = GeometryKind::cross;
  g.boundary = Boundary::open;
  g.n_sites = array.size();
  g.edges = cc.pairs;
  g.edge_classes = cc.classes;
  g.positions = array.positions;
  g.site_classes = array.species;
  for (int i = 0; i < g.n_sites; ++i) {
    if (array.species[i] == site_class::type2) g.central_site = i;
  }
  return g;
}

RydbergProtocol rydberg_ghz_protocol(int m) {
  RydbergProtocol r;
  r.array = cross_lattice_positions(m, 1.0);
  const auto g = geometry_from_array(r.array, std::numbers::sqrt2);
  r.circuit = build_ansatz(g, AnsatzScheme::prh_ising_classes, m + 1);
  r.params = fixed_ghz_cross_params(m);
  const auto psi = run_circuit(r.circuit, r.params);
  r.fidelity = overlap_fidelity(psi, ghz_state(g.n_sites));
  return r;
}

}  // namespace qlab
