#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "dense_oracle.hpp"
#include "qlab/lattice.hpp"
#include "qlab/models.hpp"
#include "qlab/pauli.hpp"

using namespace qlab;

TEST_CASE("pauli string letters and algebra") {
  const PauliString p("XZIY", 0.5);
  CHECK(p.letters() == "XZIY");
  CHECK(p.letter(0) == 'X');
  CHECK(p.y_count() == 1);
  CHECK(p.support() == std::vector<int>{0, 1, 3});
  CHECK(PauliString("XX", 1).commutes_with(PauliString("ZZ", 1)));
  CHECK_FALSE(PauliString("XI", 1).commutes_with(PauliString("ZI", 1)));
  CHECK(PauliString::pair(3, 0, 'Z', 2, 'Z', 1.0).letters() == "ZIZ");
  CHECK_THROWS(PauliString("XQ", 1.0));
}

TEST_CASE("weighted sum merges repeated patterns") {
  WeightedPauliSum h(2);
  h.add(PauliString("ZZ", 1.0));
  h.add(PauliString("ZZ", 0.5));
  CHECK(h.coefficient_of(PauliString("ZZ", 1)) == doctest::Approx(1.5));
}

TEST_CASE("lattice geometries") {
  SUBCASE("chain N=12 periodic") {
    const auto g = build_geometry(GeometryKind::chain, {12}, Boundary::periodic);
    CHECK(g.edges.size() == 12);
    CHECK(g.find_edge(11, 0) >= 0);
  }
  SUBCASE("cross m=1") {
    const auto g = build_geometry(GeometryKind::cross, {1}, Boundary::open);
    CHECK(g.n_sites == 9);
    CHECK(g.edges.size() == 8);
    CHECK(g.central_site.has_value());
  }
  SUBCASE("chain N=2 open") {
    CHECK(build_geometry(GeometryKind::chain, {2}, Boundary::open).edges.size() == 1);
  }
  SUBCASE("square symmetry group") {
    const auto g = build_geometry(GeometryKind::square, {3, 3}, Boundary::open);
    CHECK(g.edges.size() == 12);
    const auto group = symmetry_group(g);
    CHECK(group.size() == 3);  // C4 without the identity
    for (const auto& op : group) CHECK(is_edge_automorphism(g, op));
  }
  SUBCASE("triangular and 4x4 presets") {
    CHECK(build_geometry(GeometryKind::triangular10, {}, Boundary::open).n_sites == 10);
    CHECK(build_geometry(GeometryKind::square4x4, {}, Boundary::periodic).n_sites == 16);
  }
  SUBCASE("bad sizes") {
    CHECK_THROWS(build_geometry(GeometryKind::chain, {1}, Boundary::open));
    CHECK_THROWS(build_geometry(GeometryKind::cross, {-1}, Boundary::open));
  }
}

TEST_CASE("model hamiltonians") {
  SUBCASE("tfim chain N=3 PBC") {
    const auto g = build_geometry(GeometryKind::chain, {3}, Boundary::periodic);
    const auto h = build_hamiltonian(ModelKind::tfim, g);
    int zz = 0, x = 0;
    for (const auto& t : h.terms()) {
      CHECK(t.coefficient() == -1.0);
      if (t.z_mask() && !t.x_mask()) ++zz;
      if (t.x_mask() && !t.z_mask()) ++x;
    }
    CHECK(zz == 3);
    CHECK(x == 3);
  }
  SUBCASE("random ising with no disorder is uniform") {
    const auto g = build_geometry(GeometryKind::chain, {6}, Boundary::open);
    const auto w = draw_random_ising_weights(g, 0.0, 42, 3);
    for (double v : w.fields) CHECK(v == 1.0);
    for (double v : w.couplings) CHECK(v == 1.0);
  }
  SUBCASE("random ising range and determinism") {
    const auto g = build_geometry(GeometryKind::chain, {8}, Boundary::open);
    const auto a = draw_random_ising_weights(g, 1.0, 7, 0);
    const auto b = draw_random_ising_weights(g, 1.0, 7, 0);
    const auto c = draw_random_ising_weights(g, 1.0, 7, 1);
    CHECK(a.fields == b.fields);
    CHECK(a.fields != c.fields);
    for (double v : a.couplings) CHECK((v >= 0.5 && v <= 1.5));
    CHECK_THROWS(draw_random_ising_weights(g, 2.5, 7, 0));
  }
  SUBCASE("heisenberg single bond") {
    const auto g = build_geometry(GeometryKind::chain, {2}, Boundary::open);
    const auto h = build_hamiltonian(ModelKind::heisenberg, g);
    CHECK(h.size() == 3);
    for (const char* s : {"XX", "YY", "ZZ"}) CHECK(h.coefficient_of(PauliString(s, 1)) == 1.0);
  }
}

TEST_CASE("hamiltonian splits") {
  SUBCASE("tfim") {
    const auto g = build_geometry(GeometryKind::chain, {12}, Boundary::open);
    const auto s = split_hamiltonian(build_hamiltonian(ModelKind::tfim, g), SplitScheme::ising_m2);
    REQUIRE(s.parts.size() == 2);
    std::vector<std::size_t> sizes{s.parts[0].size(), s.parts[1].size()};
    std::sort(sizes.begin(), sizes.end());
    CHECK(sizes == std::vector<std::size_t>{11, 12});
  }
  SUBCASE("heisenberg N=12 PBC") {
    const auto g = build_geometry(GeometryKind::chain, {12}, Boundary::periodic);
    const auto h = build_hamiltonian(ModelKind::heisenberg, g);
    const auto s = split_hamiltonian(h, SplitScheme::heisenberg_m4);
    REQUIRE(s.parts.size() == 4);
    // XY parts carry XX + YY for each of 6 bonds, Z parts one ZZ per bond.
    std::multiset<std::size_t> sizes;
    for (const auto& p : s.parts) sizes.insert(p.size());
    CHECK(sizes == std::multiset<std::size_t>{6, 6, 12, 12});
    for (const auto& p : s.parts) CHECK(p.all_terms_commute());
    CHECK(s.sum().equals(h, 1e-15));
  }
  SUBCASE("dense sum matches") {
    const auto g = build_geometry(GeometryKind::chain, {4}, Boundary::periodic);
    const auto h = build_hamiltonian(ModelKind::tfim, g);
    const auto s = split_hamiltonian(h, SplitScheme::ising_m2);
    CHECK((oracle::matrix(s.parts[0]) + oracle::matrix(s.parts[1]) - oracle::matrix(h)).norm() < 1e-14);
  }
}
