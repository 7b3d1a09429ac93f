#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dense_oracle.hpp"
#include "qlab/ansatz.hpp"
#include "qlab/oracle.hpp"

using namespace qlab;

namespace {

constexpr double pi = std::numbers::pi;

std::string two_site(int n, int a, char la, int b, char lb) {
  std::string s(n, 'I');
  s[a] = la;
  s[b] = lb;
  return s;
}

// Dense generator of one layer, rebuilt from the resource metadata and the
// letters of each element; independent of the library's kernels.
oracle::Mat dense_layer(const CircuitSpec& c, std::size_t j, const std::vector<double>& y) {
  const int n = c.n_qubits;
  const auto& t = c.layers[j];
  oracle::Mat g = oracle::Mat::Zero(Eigen::Index{1} << n, Eigen::Index{1} << n);
  for (std::size_t e = 0; e < t.supports.size(); ++e) {
    const auto& w = t.weights[e];
    const double weight = w.y_index < 0 ? w.scale : w.scale * y[w.y_index];
    const int a = t.supports[e].a, b = t.supports[e].b;
    switch (t.kind) {
      case LayerKind::x_field: {
        std::string s(n, 'I');
        s[a] = 'X';
        g += weight * oracle::from_letters(s);
        break;
      }
      case LayerKind::zz_diagonal:
      case LayerKind::z_pair: g += weight * oracle::from_letters(two_site(n, a, 'Z', b, 'Z')); break;
      case LayerKind::xy_pair:
        g += weight * (oracle::from_letters(two_site(n, a, 'X', b, 'X')) +
                       oracle::from_letters(two_site(n, a, 'Y', b, 'Y')));
        break;
    }
  }
  return g;
}

oracle::Vec dense_circuit(const CircuitSpec& c, const ParameterVector& p) {
  oracle::Vec psi = oracle::vec(prepare_initial(c.initial_state, c.n_qubits));
  const std::size_t m = c.layers.size();
  for (int cycle = 0; cycle < c.depth; ++cycle) {
    for (std::size_t j = m; j-- > 0;) psi = oracle::expm(dense_layer(c, j, p.y), p.x[cycle * m + j]) * psi;
  }
  return psi;
}

ParameterVector random_params(const CircuitSpec& c, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.2, 1.2);
  ParameterVector p;
  for (std::size_t i = 0; i < c.x_size(); ++i) p.x.push_back(u(rng));
  for (double r : c.resource_reference) p.y.push_back(r + 0.4 * u(rng));
  return p;
}

LatticeGeometry chain(int n, Boundary b) { return build_geometry(GeometryKind::chain, {n}, b); }

}  // namespace

TEST_CASE("resource counts") {
  CHECK(build_ansatz(chain(12, Boundary::open), AnsatzScheme::prh_ising, 3).y_size() == 23);
  CHECK(build_ansatz(chain(12, Boundary::open), AnsatzScheme::prh_heisenberg, 3).y_size() == 22);
  CHECK(build_ansatz(chain(12, Boundary::periodic), AnsatzScheme::prh_heisenberg, 3).y_size() == 24);
  for (auto g : {chain(6, Boundary::open), build_geometry(GeometryKind::square, {3, 3}, Boundary::periodic)}) {
    const auto c = build_ansatz(g, AnsatzScheme::conventional_ising, 2);
    CHECK(c.y_size() == 0);
    CHECK(c.x_size() == 4);
  }
  CHECK_THROWS(build_ansatz(chain(5, Boundary::open), AnsatzScheme::prh_heisenberg, 1));
  CHECK_THROWS(build_ansatz(chain(4, Boundary::open), AnsatzScheme::prh_ising, 0));
}

TEST_CASE("zero angles leave the initial state") {
  for (auto scheme : {AnsatzScheme::prh_ising, AnsatzScheme::prh_heisenberg}) {
    const auto c = build_ansatz(chain(6, Boundary::open), scheme, 2);
    ParameterVector p{std::vector<double>(c.x_size(), 0.0), c.resource_reference};
    CHECK(run_circuit(c, p) == prepare_initial(c.initial_state, 6));
  }
}

TEST_CASE("two-site circuit against hand-written matrices") {
  const auto c = build_ansatz(chain(2, Boundary::open), AnsatzScheme::conventional_ising, 1);
  const double x1 = 0.37, x2 = -1.21;
  // layer 0 is the field layer, applied last
  const auto out = run_circuit(c, {{x1, x2}, {}});
  const oracle::Mat sx = oracle::from_letters("XI") + oracle::from_letters("IX");
  const oracle::Vec ref = oracle::expm(-sx, x1) * oracle::expm(-oracle::from_letters("ZZ"), x2) * oracle::plus_state(2);
  // exp(+i x1 sum X) exp(+i x2 ZZ) |++>
  CHECK((oracle::vec(out) - ref).norm() < 1e-14);
}

TEST_CASE("circuits match the dense oracle") {
  std::mt19937_64 rng(12);
  struct Case {
    LatticeGeometry g;
    AnsatzScheme s;
    int p;
  };
  const std::vector<Case> cases{
      {chain(4, Boundary::open), AnsatzScheme::conventional_ising, 2},
      {chain(5, Boundary::periodic), AnsatzScheme::prh_ising, 2},
      {build_geometry(GeometryKind::square, {2, 3}, Boundary::open), AnsatzScheme::prh_ising, 2},
      {chain(4, Boundary::open), AnsatzScheme::prh_heisenberg, 2},
      {chain(6, Boundary::periodic), AnsatzScheme::prh_heisenberg, 2},
      {chain(6, Boundary::periodic), AnsatzScheme::conventional_heisenberg, 3},
  };
  for (const auto& cs : cases) {
    const auto c = build_ansatz(cs.g, cs.s, cs.p);
    const auto p = random_params(c, rng);
    CHECK((oracle::vec(run_circuit(c, p)) - dense_circuit(c, p)).norm() < 1e-11);
  }
}

TEST_CASE("layout validation") {
  const auto c = build_ansatz(chain(4, Boundary::open), AnsatzScheme::prh_ising, 2);
  CHECK_THROWS(run_circuit(c, {std::vector<double>(3, 0.0), c.resource_reference}));
  CHECK_THROWS(run_circuit(c, {std::vector<double>(4, 0.0), {}}));
  CHECK_NOTHROW(check_layout(c, {std::vector<double>(4, 0.0), c.resource_reference}));
  const ParameterVector p{{1, 2, 3, 4}, c.resource_reference};
  const auto back = ParameterVector::from_flat(p.flat(), 4);
  CHECK(back.x == p.x);
  CHECK(back.y == p.y);
}

TEST_CASE("fixed cross GHZ parameters") {
  const auto p1 = fixed_ghz_cross_params(1);
  CHECK(p1.x.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(p1.x[i] == doctest::Approx(i == 0 ? pi / 4 : 3 * pi / 4));
  }
  CHECK(p1.y[0] == doctest::Approx(4.0 / 3.0));
  CHECK(p1.y[1] == doctest::Approx(1.0));
  CHECK(p1.y[2] == doctest::Approx(1.0 / 3.0));
  CHECK(published_cross_angles(2).size() == 6);
  CHECK(published_cross_angles(3).size() == 8);
  CHECK_THROWS(fixed_ghz_cross_params(4));

  for (int m = 1; m <= 3; ++m) {
    const auto c = cross_ghz_circuit(m);
    CHECK(c.n_qubits == 5 + 4 * m);
    CHECK(c.depth == m + 1);
    const double f = overlap_fidelity(run_circuit(c, fixed_ghz_cross_params(m)), ghz_state(c.n_qubits));
    CHECK(1.0 - f <= (m == 1 ? 1e-12 : 1e-10));
  }
}

TEST_CASE("cross circuit against the dense oracle") {
  const auto c = cross_ghz_circuit(1);
  const auto p = fixed_ghz_cross_params(1);
  const oracle::Vec psi = dense_circuit(c, p);
  CHECK(1.0 - oracle::fidelity(psi, oracle::vec(ghz_state(9))) < 1e-12);
}

TEST_CASE("digital export") {
  SUBCASE("two sites, one cycle") {
    const auto c = build_ansatz(chain(2, Boundary::open), AnsatzScheme::conventional_ising, 1);
    const ParameterVector p{{0.3, 0.8}, {}};
    const auto gates = export_digital_circuit(c, p);
    std::vector<std::string> names;
    for (const auto& g : gates) names.push_back(g.name);
    CHECK(names == std::vector<std::string>{"CNOT", "RZ", "CNOT", "RX", "RX"});
    const auto a = simulate_gates(gates, prepare_initial(InitialState::plus_product, 2));
    CHECK(overlap_fidelity(a, run_circuit(c, p)) == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("zero coupling becomes identity") {
    const auto c = build_ansatz(chain(3, Boundary::open), AnsatzScheme::prh_ising, 1);
    auto y = c.resource_reference;
    for (std::size_t k = 0; k < c.resources.size(); ++k) {
      if (c.resources[k].kind == ResourceCoordinate::Kind::coupling) {
        y[k] = 0.0;
        break;
      }
    }
    const auto gates = export_digital_circuit(c, {{0.5, 0.2}, y});
    int ids = 0;
    for (const auto& g : gates) ids += g.name == "I";
    CHECK(ids == 1);
  }
  SUBCASE("cross gate list reproduces GHZ") {
    for (int m = 1; m <= 3; ++m) {
      const auto c = cross_ghz_circuit(m);
      const auto gates = export_digital_circuit(c, fixed_ghz_cross_params(m));
      const auto out = simulate_gates(gates, prepare_initial(InitialState::plus_product, c.n_qubits));
      CHECK(1.0 - overlap_fidelity(out, ghz_state(c.n_qubits)) <= 1e-10);
    }
  }
}

TEST_CASE("scheme names round trip") {
  for (auto s : {AnsatzScheme::conventional_ising, AnsatzScheme::prh_ising, AnsatzScheme::prh_ising_classes,
                 AnsatzScheme::conventional_heisenberg, AnsatzScheme::prh_heisenberg}) {
    CHECK(ansatz_scheme_from_string(to_string(s)) == s);
  }
  CHECK_THROWS(ansatz_scheme_from_string("qaoa"));
}
