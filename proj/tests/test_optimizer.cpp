#include <doctest.h>

#include <atomic>
#include <cmath>
#include <random>
#include <stdexcept>

#include "dense_oracle.hpp"
#include "qlab/ansatz.hpp"
#include "qlab/models.hpp"
#include "qlab/optimizer.hpp"
#include "qlab/oracle.hpp"

using namespace qlab;

namespace {

LatticeGeometry chain(int n, Boundary b) { return build_geometry(GeometryKind::chain, {n}, b); }

ParameterVector random_params(const CircuitSpec& c, std::mt19937_64& rng, double scale = 2.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  ParameterVector p;
  for (std::size_t i = 0; i < c.x_size(); ++i) p.x.push_back(u(rng));
  for (double r : c.resource_reference) p.y.push_back(r + 0.2 * u(rng));
  return p;
}

double tfim_gs_run(int n, Boundary b, int p, int starts, std::uint64_t seed) {
  const auto g = chain(n, b);
  const auto h = build_hamiltonian(ModelKind::tfim, g);
  const auto c = build_ansatz(g, AnsatzScheme::conventional_ising, p);
  OptConfig cfg;
  cfg.n_starts = starts;
  cfg.seed = seed;
  return multistart_minimize(make_cost(c, Objective::infidelity, exact_ground_state(h).state), cfg).best_cost;
}

}  // namespace

TEST_CASE("cost functions") {
  const auto cross = cross_ghz_circuit(1);
  const auto ghz_cost = make_cost(cross, Objective::infidelity, ghz_state(9));
  CHECK(ghz_cost(fixed_ghz_cross_params(1)) <= 1e-12);

  const auto g = chain(6, Boundary::open);
  const auto h = build_hamiltonian(ModelKind::tfim, g);
  const auto c = build_ansatz(g, AnsatzScheme::prh_ising, 2);
  const auto energy = make_cost(c, Objective::energy, h);
  CHECK(energy({std::vector<double>(c.x_size(), 0.0), c.resource_reference}) == doctest::Approx(-6.0));

  const double e0 = oracle::ground_energy(h);
  std::mt19937_64 rng(1);
  double lowest = 1e9;
  for (int k = 0; k < 200; ++k) lowest = std::min(lowest, energy(random_params(c, rng)));
  CHECK(lowest >= e0 - 1e-12);

  // Energy runs report the fidelity against a reference when one is set.
  auto with_ref = make_cost(c, Objective::energy, h);
  with_ref.with_reference(exact_ground_state(h).state);
  CHECK(with_ref.fidelity({std::vector<double>(c.x_size(), 0.0), c.resource_reference}).has_value());
  CHECK_FALSE(energy.fidelity({std::vector<double>(c.x_size(), 0.0), c.resource_reference}).has_value());
}

TEST_CASE("gradients") {
  std::mt19937_64 rng(2);
  SUBCASE("constant cost") {
    const auto g = chain(3, Boundary::open);
    WeightedPauliSum id(3);
    id.add(PauliString::identity(3, 2.5));
    const auto c = build_ansatz(g, AnsatzScheme::prh_ising, 2);
    const auto grad = gradient(make_cost(c, Objective::energy, id), random_params(c, rng), GradientMode::central_difference);
    for (double v : grad) CHECK(std::abs(v) < 1e-9);
  }
  SUBCASE("central difference against parameter shift") {
    const auto g = chain(4, Boundary::periodic);
    const auto h = build_hamiltonian(ModelKind::tfim, g);
    const auto c = build_ansatz(g, AnsatzScheme::conventional_ising, 3);
    for (auto obj : {Objective::energy, Objective::infidelity}) {
      const auto cost = obj == Objective::energy ? make_cost(c, obj, h)
                                                 : make_cost(c, obj, exact_ground_state(h).state);
      for (int k = 0; k < 5; ++k) {
        const auto p = random_params(c, rng);
        const auto a = gradient(cost, p, GradientMode::central_difference);
        const auto b = gradient(cost, p, GradientMode::parameter_shift);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-6);
      }
    }
  }
  SUBCASE("parameter shift needs a y-free circuit") {
    const auto c = build_ansatz(chain(4, Boundary::open), AnsatzScheme::prh_ising, 1);
    const auto cost = make_cost(c, Objective::energy, build_hamiltonian(ModelKind::tfim, chain(4, Boundary::open)));
    CHECK_THROWS_AS(gradient(cost, random_params(c, rng), GradientMode::parameter_shift), std::invalid_argument);
  }
  SUBCASE("stationary at the cross optimum") {
    const auto c = cross_ghz_circuit(1);
    const auto grad = gradient(make_cost(c, Objective::infidelity, ghz_state(9)), fixed_ghz_cross_params(1),
                               GradientMode::central_difference);
    double norm = 0.0;
    for (double v : grad) norm += v * v;
    CHECK(std::sqrt(norm) <= 1e-5);
  }
}

TEST_CASE("bfgs on a convex quadratic") {
  const std::vector<double> centre{1.0, -2.0, 0.5, 3.0, -0.25};
  const std::vector<double> scale{1.0, 4.0, 0.5, 10.0, 2.0};
  const CostFn f = [&](std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i < 5; ++i) s += scale[i] * (x[i] - centre[i]) * (x[i] - centre[i]);
    return s;
  };
  const GradFn g = [&](std::span<const double> x, std::span<double> out) {
    for (std::size_t i = 0; i < 5; ++i) out[i] = 2.0 * scale[i] * (x[i] - centre[i]);
  };
  const auto r = bfgs(f, g, std::vector<double>(5, 0.0), OptConfig{});
  CHECK(r.converged);
  for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(r.x[i] - centre[i]) < 1e-8);
  // and without an analytic gradient
  const auto fd = bfgs(f, GradFn{}, std::vector<double>(5, 0.0), OptConfig{});
  for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(fd.x[i] - centre[i]) < 1e-6);
  for (std::size_t i = 1; i < r.history.size(); ++i) CHECK(r.history[i] <= r.history[i - 1]);
}

TEST_CASE("boundary conditions at p = N/2") {
  CHECK(tfim_gs_run(4, Boundary::periodic, 2, 20, 3) <= 1e-8);
  CHECK(tfim_gs_run(4, Boundary::open, 2, 20, 3) > 1e-4);
}

TEST_CASE("multistart determinism and monotonicity") {
  const auto g = chain(6, Boundary::open);
  const auto h = build_hamiltonian(ModelKind::tfim, g);
  const auto c = build_ansatz(g, AnsatzScheme::prh_ising, 2);
  const auto cost = make_cost(c, Objective::infidelity, exact_ground_state(h).state);
  OptConfig cfg;
  cfg.seed = 77;
  cfg.n_starts = 1;
  const auto one = multistart_minimize(cost, cfg);
  cfg.n_starts = 10;
  const auto ten = multistart_minimize(cost, cfg);
  const auto again = multistart_minimize(cost, cfg);
  CHECK(ten.best_cost <= one.best_cost);
  CHECK(ten.per_start_costs[0] == one.best_cost);
  CHECK(again.best_cost == ten.best_cost);
  CHECK(again.best_params.x == ten.best_params.x);
  CHECK(again.best_params.y == ten.best_params.y);
  CHECK(again.per_start_costs == ten.per_start_costs);
  CHECK(again.evaluations == ten.evaluations);

  // Thread count does not change the answer.
  cfg.threads = 1;
  const auto serial = multistart_minimize(cost, cfg);
  CHECK(serial.per_start_costs == ten.per_start_costs);

  const auto s0 = draw_start(c, cfg, 3), s1 = draw_start(c, cfg, 3);
  CHECK(s0.x == s1.x);
  for (double x : s0.x) CHECK(std::abs(x) <= cfg.x_init_scale);
  for (std::size_t k = 0; k < s0.y.size(); ++k) CHECK(std::abs(s0.y[k] - c.resource_reference[k]) <= cfg.init_scale);
}

TEST_CASE("warm-started PRH never loses to conventional") {
  const auto g = chain(8, Boundary::open);
  const auto h = build_hamiltonian(ModelKind::tfim, g);
  const auto target = exact_ground_state(h).state;
  const auto conv = build_ansatz(g, AnsatzScheme::conventional_ising, 4);
  const auto prh = build_ansatz(g, AnsatzScheme::prh_ising, 4);
  OptConfig cfg;
  cfg.n_starts = 3;
  cfg.seed = 5;
  const auto rc = multistart_minimize(make_cost(conv, Objective::infidelity, target), cfg);
  const ParameterVector warm{rc.best_params.x, prh.resource_reference};
  const auto prh_cost = make_cost(prh, Objective::infidelity, target);
  CHECK(prh_cost(warm) == rc.best_cost);
  const auto rp = multistart_minimize(prh_cost, cfg, warm);
  CHECK(rp.best_cost <= rc.best_cost);
  CHECK(improvement_ratio(1.0 - rc.best_cost, 1.0 - rp.best_cost) >= 0.0);
}

TEST_CASE("symmetry report") {
  const auto g = chain(6, Boundary::open);
  const auto h = build_hamiltonian(ModelKind::tfim, g);
  const auto c = build_ansatz(g, AnsatzScheme::prh_ising, 2);
  const auto cost = make_cost(c, Objective::infidelity, exact_ground_state(h).state);
  ParameterVector p{{0.1, 0.2, 0.3, 0.4}, c.resource_reference};
  const auto rep = symmetry_report(p, cost, g);
  REQUIRE_FALSE(rep.deviations.empty());
  for (double d : rep.deviations) CHECK(d == 0.0);
  CHECK(rep.cost_change() == doctest::Approx(0.0).epsilon(1e-15));

  const auto sq = build_geometry(GeometryKind::square, {3, 3}, Boundary::open);
  const auto csq = build_ansatz(sq, AnsatzScheme::prh_ising, 1);
  for (const auto& op : symmetry_group(sq)) {
    const auto perm = resource_permutation(csq, op);
    std::vector<int> sorted = perm;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t k = 0; k < sorted.size(); ++k) CHECK(sorted[k] == static_cast<int>(k));
  }
}

TEST_CASE("parallel_for") {
  std::vector<int> hit(100, 0);
  parallel_for(hit.size(), 4, [&](std::size_t i) { hit[i] += 1; });
  for (int v : hit) CHECK(v == 1);
  CHECK_THROWS_AS(parallel_for(10, 3, [](std::size_t i) {
                    if (i == 4) throw std::runtime_error("boom");
                  }),
                  std::runtime_error);
  CHECK(worker_count(2) >= 1);
}
