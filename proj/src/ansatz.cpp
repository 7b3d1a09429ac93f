#include "qlab/ansatz.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

namespace qlab {

namespace {

using Kind = ResourceCoordinate::Kind;

std::string site_name(const char* prefix, int a) {
  return std::string(prefix) + "_" + std::to_string(a);
}

std::string bond_name(const char* prefix, int a, int b) {
  return std::string(prefix) + "_" + std::to_string(a) + "_" + std::to_string(b);
}

// Driven sites. The class-resolved circuit leaves type-2 atoms undriven.
std::vector<int> field_sites(const LatticeGeometry& g, bool type1_only) {
  std::vector<int> out;
  for (int i = 0; i < g.n_sites; ++i) {
    if (type1_only && !g.site_classes.empty() && g.site_classes[i] != site_class::type1) {
      continue;
    }
    out.push_back(i);
  }
  return out;
}

CircuitSpec ising_ansatz(const LatticeGeometry& g, AnsatzScheme scheme,
                         const AnsatzOptions& opt) {
  CircuitSpec c;
  c.scheme = scheme;
  c.n_qubits = g.n_sites;
  c.initial_state = InitialState::plus_product;

  IsingWeights w;
  if (opt.target_weights) {
    w = *opt.target_weights;
    if (w.couplings.size() != g.edges.size() ||
        w.fields.size() != static_cast<std::size_t>(g.n_sites)) {
      throw std::invalid_argument("target weights do not match the geometry");
    }
  } else {
    if (opt.target_is_disordered && scheme == AnsatzScheme::conventional_ising) {
      throw std::invalid_argument(
          "conventional ansatz on a disordered target needs target_weights");
    }
    w.couplings.assign(g.edges.size(), 1.0);
    w.fields.assign(g.n_sites, 1.0);
  }

  const auto driven = field_sites(g, scheme == AnsatzScheme::prh_ising_classes);
  LayerTemplate xl{"x_field", LayerKind::x_field, {}, {}};
  LayerTemplate zl{"zz", LayerKind::zz_diagonal, {}, {}};

  if (scheme == AnsatzScheme::conventional_ising) {
    for (int i : driven) {
      xl.supports.push_back({i, -1});
      xl.weights.push_back({-w.fields[i], -1});
    }
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      zl.supports.push_back({g.edges[e].first, g.edges[e].second});
      zl.weights.push_back({-w.couplings[e], -1});
    }
  } else if (scheme == AnsatzScheme::prh_ising) {
    for (int i : driven) {
      xl.supports.push_back({i, -1});
      xl.weights.push_back({-1.0, static_cast<int>(c.resources.size())});
      c.resources.push_back({Kind::field, i, -1, site_name("h", i)});
      c.resource_reference.push_back(w.fields[i]);
    }
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      const auto [a, b] = g.edges[e];
      zl.supports.push_back({a, b});
      zl.weights.push_back({-1.0, static_cast<int>(c.resources.size())});
      c.resources.push_back({Kind::coupling, a, b, bond_name("J", a, b)});
      c.resource_reference.push_back(w.couplings[e]);
    }
  } else {  // prh_ising_classes
    if (g.edge_classes.size() != g.edges.size()) {
      throw std::invalid_argument("class-resolved ansatz needs edge classes");
    }
    for (int i : driven) {
      xl.supports.push_back({i, -1});
      xl.weights.push_back({-w.fields[i], -1});
    }
    const std::set<int> classes(g.edge_classes.begin(), g.edge_classes.end());
    std::vector<int> slot(*classes.rbegin() + 1, -1);
    for (int k : classes) {
      slot[k] = static_cast<int>(c.resources.size());
      c.resources.push_back({Kind::coupling_class, k, -1, "J" + std::to_string(k)});
      c.resource_reference.push_back(1.0);
    }
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      zl.supports.push_back({g.edges[e].first, g.edges[e].second});
      zl.weights.push_back({-w.couplings[e], slot[g.edge_classes[e]]});
    }
  }
  c.layers = {std::move(xl), std::move(zl)};
  return c;
}

CircuitSpec heisenberg_ansatz(const LatticeGeometry& g, AnsatzScheme scheme) {
  const int n = g.n_sites;
  if (n % 2 != 0) throw std::invalid_argument("heisenberg ansatz needs an even site count");
  if (g.kind != GeometryKind::chain) {
    throw std::invalid_argument("heisenberg ansatz is defined on chains");
  }
  CircuitSpec c;
  c.scheme = scheme;
  c.n_qubits = n;
  c.initial_state = InitialState::singlet_product;

  // Bonds in chain order; (N-1, 0) closes a periodic chain and is odd.
  std::vector<Edge> even, odd;
  for (const auto& [a, b] : g.edges) {
    const int lo = std::min(a, b), hi = std::max(a, b);
    if (hi == lo + 1) {
      (lo % 2 == 0 ? even : odd).push_back({lo, hi});
    } else {
      odd.push_back({hi, lo});
    }
  }

  const bool prh = scheme == AnsatzScheme::prh_heisenberg;
  auto make = [&](const char* label, LayerKind kind, const std::vector<Edge>& bonds,
                  Kind rk, const char* prefix) {
    LayerTemplate t{label, kind, {}, {}};
    for (const auto& [a, b] : bonds) {
      t.supports.push_back({a, b});
      if (prh) {
        t.weights.push_back({1.0, static_cast<int>(c.resources.size())});
        c.resources.push_back({rk, a, b, bond_name(prefix, a, b)});
        c.resource_reference.push_back(1.0);
      } else {
        t.weights.push_back({1.0, -1});
      }
    }
    return t;
  };
  // Resource order follows (g_even, Delta_even, g_odd, Delta_odd); layer order
  // puts the Z part first within each bond family. The two commute.
  auto g_even = make("even_xy", LayerKind::xy_pair, even, Kind::xy_coupling, "g");
  auto d_even = make("even_z", LayerKind::z_pair, even, Kind::z_coupling, "Delta");
  auto g_odd = make("odd_xy", LayerKind::xy_pair, odd, Kind::xy_coupling, "g");
  auto d_odd = make("odd_z", LayerKind::z_pair, odd, Kind::z_coupling, "Delta");
  c.layers = {std::move(d_even), std::move(g_even), std::move(d_odd), std::move(g_odd)};
  return c;
}

// Published GHZ angle lists, grouped as (U1 angles for every cycle, then U2).
const std::vector<double>& published(int m) {
  constexpr double q = std::numbers::pi / 4.0;
  static const std::vector<double> m1{q, 3 * q, 3 * q, 3 * q};
  static const std::vector<double> m2{q, q, 3 * q, 3 * q, 3 * q, 3 * q};
  static const std::vector<double> m3{q, q, q, 3 * q, 3 * q, 3 * q, 3 * q, 3 * q};
  switch (m) {
    case 1: return m1;
    case 2: return m2;
    case 3: return m3;
    default: throw std::invalid_argument("fixed GHZ parameters exist for m = 1, 2, 3 only");
  }
}

}  // namespace

LayerGenerator CircuitSpec::bind(std::size_t layer, std::span<const double> y) const {
  const auto& t = layers.at(layer);
  LayerGenerator g;
  g.kind = t.kind;
  g.supports = t.supports;
  g.weights.reserve(t.weights.size());
  for (const auto& w : t.weights) {
    g.weights.push_back(w.y_index < 0 ? w.scale : w.scale * y[w.y_index]);
  }
  return g;
}

std::vector<double> ParameterVector::flat() const {
  std::vector<double> out(x);
  out.insert(out.end(), y.begin(), y.end());
  return out;
}

ParameterVector ParameterVector::from_flat(std::span<const double> flat, std::size_t x_size) {
  if (x_size > flat.size()) throw std::invalid_argument("flat vector shorter than x");
  ParameterVector p;
  p.x.assign(flat.begin(), flat.begin() + static_cast<std::ptrdiff_t>(x_size));
  p.y.assign(flat.begin() + static_cast<std::ptrdiff_t>(x_size), flat.end());
  return p;
}

CircuitSpec build_ansatz(const LatticeGeometry& geometry, AnsatzScheme scheme, int depth,
                         const AnsatzOptions& options) {
  if (depth < 1) throw std::invalid_argument("depth p must be >= 1");
  CircuitSpec c;
  switch (scheme) {
    case AnsatzScheme::conventional_ising:
    case AnsatzScheme::prh_ising:
    case AnsatzScheme::prh_ising_classes:
      c = ising_ansatz(geometry, scheme, options);
      break;
    case AnsatzScheme::conventional_heisenberg:
    case AnsatzScheme::prh_heisenberg:
      c = heisenberg_ansatz(geometry, scheme);
      break;
  }
  c.depth = depth;
  for (std::size_t j = 0; j < c.layers.size(); ++j) {
    validate_layer(c.bind(j, c.resource_reference), c.n_qubits);
  }
  return c;
}

void check_layout(const CircuitSpec& circuit, const ParameterVector& params) {
  if (params.x.size() != circuit.x_size() || params.y.size() != circuit.y_size()) {
    throw std::invalid_argument("parameter layout mismatch: expected |x| = " +
                                std::to_string(circuit.x_size()) + ", |y| = " +
                                std::to_string(circuit.y_size()) + ", got " +
                                std::to_string(params.x.size()) + ", " +
                                std::to_string(params.y.size()));
  }
}

namespace {

StateVector run_impl(const CircuitSpec& c, const ParameterVector& p,
                     const TermInsertion* ins) {
  check_layout(c, p);
  const int n = c.n_qubits;
  const std::size_t m = c.layers.size();
  std::vector<LayerGenerator> gens;
  std::vector<std::vector<double>> diags(m);
  for (std::size_t j = 0; j < m; ++j) {
    gens.push_back(c.bind(j, p.y));
    if (gens[j].is_diagonal()) diags[j] = diagonal_of(gens[j], n);
  }
  std::optional<PauliString> inserted;
  if (ins) {
    if (ins->x_index >= c.x_size()) throw std::out_of_range("insertion x index");
    inserted = element_terms(c.layers[ins->x_index % m], ins->element, n).at(ins->sub);
  }

  StateVector s = prepare_initial(c.initial_state, n);
  for (int cyc = 0; cyc < c.depth; ++cyc) {
    for (std::size_t jj = m; jj-- > 0;) {
      const std::size_t xi = static_cast<std::size_t>(cyc) * m + jj;
      const double angle = p.x[xi];
      if (gens[jj].is_diagonal()) {
        kernels::diagonal(s.amplitudes(), diags[jj], angle);
      } else {
        kernels::layer(s.amplitudes(), n, gens[jj], angle);
      }
      if (inserted && ins->x_index == xi) apply_pauli_rotation(s, *inserted, ins->angle);
    }
  }
  return s;
}

}  // namespace

StateVector run_circuit(const CircuitSpec& circuit, const ParameterVector& params) {
  return run_impl(circuit, params, nullptr);
}

StateVector run_circuit(const CircuitSpec& circuit, const ParameterVector& params,
                        const TermInsertion& insertion) {
  return run_impl(circuit, params, &insertion);
}

std::vector<PauliString> element_terms(const LayerTemplate& layer, std::size_t element,
                                       int n) {
  const auto& e = layer.supports.at(element);
  switch (layer.kind) {
    case LayerKind::x_field: return {PauliString::single(n, e.a, 'X', 1.0)};
    case LayerKind::zz_diagonal:
    case LayerKind::z_pair: return {PauliString::pair(n, e.a, 'Z', e.b, 'Z', 1.0)};
    case LayerKind::xy_pair:
      return {PauliString::pair(n, e.a, 'X', e.b, 'X', 1.0),
              PauliString::pair(n, e.a, 'Y', e.b, 'Y', 1.0)};
  }
  return {};
}

CircuitSpec cross_ghz_circuit(int m) {
  const auto g = with_inter_arm_edges(build_geometry(GeometryKind::cross, {m}, Boundary::open));
  return build_ansatz(g, AnsatzScheme::prh_ising_classes, m + 1);
}

std::vector<double> published_cross_angles(int m) { return published(m); }

ParameterVector fixed_ghz_cross_params(int m) {
  const auto& flat = published(m);
  const std::size_t p = static_cast<std::size_t>(m) + 1;
  ParameterVector out;
  out.x.resize(2 * p);
  for (std::size_t n = 0; n < p; ++n) {
    out.x[2 * n] = flat[n];          // x_field (U1) of cycle n
    out.x[2 * n + 1] = flat[p + n];  // zz (U2) of cycle n
  }
  out.y = {4.0 / 3.0, 1.0, 1.0 / 3.0};
  return out;
}

std::vector<Gate> export_digital_circuit(const CircuitSpec& circuit,
                                         const ParameterVector& params) {
  check_layout(circuit, params);
  for (const auto& t : circuit.layers) {
    if (t.kind != LayerKind::zz_diagonal && t.kind != LayerKind::x_field) {
      throw std::invalid_argument("digital export supports zz_diagonal and x_field layers only");
    }
  }
  const std::size_t m = circuit.layers.size();
  std::vector<Gate> gates;
  for (int cyc = 0; cyc < circuit.depth; ++cyc) {
    for (std::size_t jj = m; jj-- > 0;) {
      const double angle = params.x[static_cast<std::size_t>(cyc) * m + jj];
      const auto gen = circuit.bind(jj, params.y);
      for (std::size_t k = 0; k < gen.supports.size(); ++k) {
        const auto& e = gen.supports[k];
        const double phi = angle * gen.weights[k];
        if (gen.kind == LayerKind::x_field) {
          if (gen.weights[k] == 0.0) {
            gates.push_back({"I", {e.a}, 0.0});
          } else {
            gates.push_back({"RX", {e.a}, 2.0 * phi});
          }
        } else if (gen.weights[k] == 0.0) {
          gates.push_back({"I", {e.a, e.b}, 0.0});
        } else {
          gates.push_back({"CNOT", {e.a, e.b}, 0.0});
          gates.push_back({"RZ", {e.b}, 2.0 * phi});
          gates.push_back({"CNOT", {e.a, e.b}, 0.0});
        }
      }
    }
  }
  return gates;
}

StateVector simulate_gates(const std::vector<Gate>& gates, const StateVector& initial) {
  StateVector s = initial;
  for (const auto& g : gates) {
    if (g.name == "CNOT") {
      apply_cnot(s, g.qubits.at(0), g.qubits.at(1));
    } else if (g.name == "RZ") {
      apply_rz(s, g.qubits.at(0), g.angle);
    } else if (g.name == "RX") {
      apply_rx(s, g.qubits.at(0), g.angle);
    } else if (g.name != "I") {
      throw std::invalid_argument("unknown gate '" + g.name + "'");
    }
  }
  return s;
}

std::string to_string(AnsatzScheme s) {
  switch (s) {
    case AnsatzScheme::conventional_ising: return "conventional_ising";
    case AnsatzScheme::prh_ising: return "prh_ising";
    case AnsatzScheme::prh_ising_classes: return "prh_ising_classes";
    case AnsatzScheme::conventional_heisenberg: return "conventional_heisenberg";
    case AnsatzScheme::prh_heisenberg: return "prh_heisenberg";
  }
  return "?";
}

AnsatzScheme ansatz_scheme_from_string(const std::string& s) {
  for (auto k : {AnsatzScheme::conventional_ising, AnsatzScheme::prh_ising,
                 AnsatzScheme::prh_ising_classes, AnsatzScheme::conventional_heisenberg,
                 AnsatzScheme::prh_heisenberg}) {
    if (to_string(k) == s) return k;
  }
  throw std::invalid_argument("unknown ansatz scheme '" + s + "'");
}

bool is_prh(AnsatzScheme s) {
  return s == AnsatzScheme::prh_ising || s == AnsatzScheme::prh_ising_classes ||
         s == AnsatzScheme::prh_heisenberg;
}

}  // namespace qlab
