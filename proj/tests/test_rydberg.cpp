#include <doctest.h>

#include <cmath>
#include <random>

#include "dense_oracle.hpp"
#include "qlab/oracle.hpp"
#include "qlab/rydberg.hpp"

using namespace qlab;

namespace {

DressedAtomArray pair_at(double r, double v0, double rc) {
  DressedAtomArray a;
  a.positions = {{0.0, 0.0}, {r, 0.0}};
  a.species = {site_class::type1, site_class::type1};
  a.v0 = v0;
  a.rc = rc;
  return a;
}

// Echo built from the n = (Z + 1)/2 projector, compared with U_ZZ up to phase.
double dense_echo_deviation(const DressedAtomArray& a, double gamma) {
  const int n = a.size();
  const auto dim = Eigen::Index{1} << n;
  const oracle::Mat id = oracle::Mat::Identity(dim, dim);
  oracle::Mat hd = oracle::Mat::Zero(dim, dim), hzz = oracle::Mat::Zero(dim, dim), sx = oracle::Mat::Zero(dim, dim);
  auto op = [&](int i, char c) {
    std::string s(n, 'I');
    s[i] = c;
    return oracle::from_letters(s);
  };
  for (int i = 0; i < n; ++i) {
    sx += op(i, 'X');
    for (int j = i + 1; j < n; ++j) {
      const double dx = a.positions[i][0] - a.positions[j][0], dy = a.positions[i][1] - a.positions[j][1];
      const double r6 = std::pow(dx * dx + dy * dy, 3);
      const double v = a.v0 * std::pow(a.rc, 6) / (r6 + std::pow(a.rc, 6));
      hd += v * (0.5 * (op(i, 'Z') + id)) * (0.5 * (op(j, 'Z') + id));
      hzz += (v / 4.0) * op(i, 'Z') * op(j, 'Z');
    }
  }
  const oracle::Mat x = oracle::expm(sx, M_PI / 2);
  const oracle::Mat half = oracle::expm(hd, gamma / 2);
  const oracle::Mat echo = x * half * x * half;
  const oracle::Mat target = oracle::expm(hzz, gamma);
  const oracle::cd tr = (target.adjoint() * echo).trace();
  const oracle::Mat diff = echo - (tr / std::abs(tr)) * target;
  Eigen::JacobiSVD<oracle::Mat> svd(diff);
  return svd.singularValues()[0];
}

}  // namespace

TEST_CASE("dressed coupling profile") {
  const double v0 = 2.5, rc = 1.7;
  CHECK(dressed_coupling(pair_at(1e-9, v0, rc), 0, 1) == doctest::Approx(v0));
  CHECK(dressed_coupling(pair_at(rc, v0, rc), 0, 1) == doctest::Approx(v0 / 2));
  CHECK(dressed_coupling(pair_at(10 * rc, v0, rc), 0, 1) == doctest::Approx(v0 * 1e-6 / (1 + 1e-6)).epsilon(1e-12));
  CHECK(dressed_v0(2.0, 1.0) == doctest::Approx(2.0));
  CHECK(dressed_rc(128.0, 1.0) == doctest::Approx(std::pow(64.0, 1.0 / 6.0)));
}

TEST_CASE("echo sequence layout") {
  const auto seq = echo_sequence(0.8);
  REQUIRE(seq.size() == 4);
  CHECK(seq[0].kind == EchoElement::Kind::dressed);
  CHECK(seq[0].duration == doctest::Approx(0.4));
  CHECK(seq[1].kind == EchoElement::Kind::x_pulse);
  CHECK(seq[2].duration == doctest::Approx(0.4));
  CHECK(seq[3].kind == EchoElement::Kind::x_pulse);
}

TEST_CASE("echo realises the Ising dynamics") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  SUBCASE("two atoms") {
    for (int k = 0; k < 10; ++k) {
      const auto a = pair_at(0.3 + 2 * u(rng), 0.5 + u(rng), 1.0);
      const double gamma = 10 * u(rng);
      const auto r = echo_to_ising(a, gamma);
      REQUIRE(r.deviation.has_value());
      CHECK(*r.deviation <= 1e-10);
      CHECK(dense_echo_deviation(a, gamma) <= 1e-10);
      CHECK(r.zz_angles[0] == doctest::Approx(gamma * dressed_coupling(a, 0, 1) / 4));
    }
  }
  SUBCASE("zero duration") {
    const auto r = echo_to_ising(pair_at(1.0, 1.0, 1.0), 0.0);
    CHECK(*r.deviation <= 1e-14);
  }
  SUBCASE("four-atom cross fragment") {
    const auto cross = cross_lattice_positions(1, 1.0);
    DressedAtomArray a;
    for (int i : {0, 1, 3, 5}) {
      a.positions.push_back(cross.positions[i]);
      a.species.push_back(cross.species[i]);
    }
    for (int k = 0; k < 5; ++k) {
      const double gamma = 10 * u(rng);
      CHECK(*echo_to_ising(a, gamma).deviation <= 1e-10);
      CHECK(dense_echo_deviation(a, gamma) <= 1e-10);
    }
  }
  SUBCASE("large arrays skip the dense comparison") {
    CHECK_FALSE(echo_to_ising(cross_lattice_positions(1, 1.0), 1.0).deviation.has_value());
  }
}

TEST_CASE("cross arrays") {
  const auto a1 = cross_lattice_positions(1, 1.0);
  CHECK(a1.size() == 9);
  int type2 = 0;
  for (int s : a1.species) type2 += s == site_class::type2;
  CHECK(type2 == 1);
  CHECK(cross_lattice_positions(3, 1.0).size() == 17);
  for (int m = 1; m <= 3; ++m) {
    const auto cls = classify_couplings(cross_lattice_positions(m, 1.0), std::sqrt(2.0));
    CHECK(cls.count == 3);
  }
}

TEST_CASE("rydberg GHZ protocol") {
  for (int m = 1; m <= 3; ++m) {
    const auto proto = rydberg_ghz_protocol(m);
    CHECK(1.0 - proto.fidelity <= (m == 1 ? 1e-12 : 1e-10));
    const double direct = overlap_fidelity(run_circuit(proto.circuit, proto.params), ghz_state(proto.circuit.n_qubits));
    CHECK(direct == doctest::Approx(proto.fidelity).epsilon(1e-14));
  }
}
