#include "qlab/optimizer.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

namespace qlab {

// ---------------------------------------------------------------- cost

CircuitCost::CircuitCost(CircuitSpec circuit, Objective objective, const Target& target)
    : circuit_(std::make_shared<const CircuitSpec>(std::move(circuit))), objective_(objective) {
  const int n = circuit_->n_qubits;
  if (objective == Objective::infidelity) {
    if (const auto* s = std::get_if<StateVector>(&target)) {
      target_state_ = *s;
    } else if (const auto* g = std::get_if<GroundStateResult>(&target)) {
      target_state_ = g->state;
    } else {
      throw std::invalid_argument("infidelity cost needs a target state");
    }
    if (target_state_->n_qubits() != n) throw std::invalid_argument("target width mismatch");
  } else {
    const auto* h = std::get_if<WeightedPauliSum>(&target);
    if (!h) throw std::invalid_argument("energy cost needs a Hamiltonian");
    if (h->n_qubits() != n) throw std::invalid_argument("Hamiltonian width mismatch");
    hamiltonian_ = *h;
  }
}

double CircuitCost::of_state(const StateVector& psi) const {
  if (objective_ == Objective::infidelity) {
    return std::clamp(1.0 - overlap_fidelity(psi, *target_state_), 0.0, 1.0);
  }
  return expectation(psi, *hamiltonian_);
}

double CircuitCost::operator()(const ParameterVector& p) const {
  return of_state(run_circuit(*circuit_, p));
}

std::optional<double> CircuitCost::fidelity(const ParameterVector& p) const {
  if (!target_state_) return std::nullopt;
  return overlap_fidelity(run_circuit(*circuit_, p), *target_state_);
}

CircuitCost& CircuitCost::with_reference(const StateVector& ref) {
  if (ref.n_qubits() != circuit_->n_qubits) throw std::invalid_argument("reference width");
  if (objective_ == Objective::infidelity) {
    throw std::logic_error("infidelity costs already carry their reference");
  }
  target_state_ = ref;
  return *this;
}

CircuitCost make_cost(const CircuitSpec& circuit, Objective objective,
                      const CircuitCost::Target& target) {
  return CircuitCost(circuit, objective, target);
}

// ---------------------------------------------------------------- gradients

namespace {

std::vector<double> central_difference(const CostFn& f, std::span<const double> x) {
  std::vector<double> xp(x.begin(), x.end());
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double keep = xp[i];
    xp[i] = keep + finite_difference_step;
    const double up = f(xp);
    xp[i] = keep - finite_difference_step;
    const double down = f(xp);
    xp[i] = keep;
    g[i] = (up - down) / (2.0 * finite_difference_step);
  }
  return g;
}

CostFn flat_cost(const CircuitCost& cost) {
  const std::size_t nx = cost.circuit().x_size();
  return [&cost, nx](std::span<const double> v) {
    return cost(ParameterVector::from_flat(v, nx));
  };
}

std::vector<double> parameter_shift(const CircuitCost& cost, const ParameterVector& p) {
  const auto& c = cost.circuit();
  if (c.y_size() != 0) {
    throw std::invalid_argument(
        "parameter-shift gradient is not defined for resource (y) coordinates");
  }
  check_layout(c, p);
  constexpr double shift = std::numbers::pi / 4.0;
  const std::size_t m = c.layers.size();
  std::vector<double> g(c.x_size(), 0.0);
  for (std::size_t xi = 0; xi < c.x_size(); ++xi) {
    const auto gen = c.bind(xi % m, p.y);
    const int subs = gen.kind == LayerKind::xy_pair ? 2 : 1;
    double acc = 0.0;
    for (std::size_t k = 0; k < gen.supports.size(); ++k) {
      if (gen.weights[k] == 0.0) continue;
      for (int s = 0; s < subs; ++s) {
        const double up = cost.of_state(run_circuit(c, p, {xi, k, s, shift}));
        const double down = cost.of_state(run_circuit(c, p, {xi, k, s, -shift}));
        acc += gen.weights[k] * (up - down);
      }
    }
    g[xi] = acc;
  }
  return g;
}

}  // namespace

std::vector<double> gradient(const CircuitCost& cost, const ParameterVector& params,
                             GradientMode mode) {
  check_layout(cost.circuit(), params);
  if (mode == GradientMode::parameter_shift) return parameter_shift(cost, params);
  const auto flat = params.flat();
  return central_difference(flat_cost(cost), flat);
}

// ---------------------------------------------------------------- BFGS

namespace {

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double e : v) m = std::max(m, std::abs(e));
  return m;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

struct Probe {
  double a = 0.0;
  double f = 0.0;
  double dphi = 0.0;
  std::vector<double> x;
  std::vector<double> g;
};

// Minimiser of the cubic through (a0, f0, d0), (a1, f1, d1); NaN if none.
double cubic_min(const Probe& p0, const Probe& p1) {
  const double d1 = p0.dphi + p1.dphi - 3.0 * (p0.f - p1.f) / (p0.a - p1.a);
  const double disc = d1 * d1 - p0.dphi * p1.dphi;
  if (!(disc >= 0.0)) return std::numeric_limits<double>::quiet_NaN();
  const double d2 = std::copysign(std::sqrt(disc), p1.a - p0.a);
  return p1.a - (p1.a - p0.a) * (p1.dphi + d2 - d1) / (p1.dphi - p0.dphi + 2.0 * d2);
}

class LineSearch {
public:
  LineSearch(const CostFn& f, const GradFn& g, std::span<const double> x0, double f0,
             std::span<const double> g0, std::span<const double> dir)
      : f_(f), g_(g), x0_(x0), dir_(dir), f0_(f0), dphi0_(dot(g0, dir)) {}

  std::optional<Probe> run(double a_init) {
    Probe prev{0.0, f0_, dphi0_, {}, {}};
    double a = a_init;
    for (int i = 0; i < 40; ++i) {
      Probe cur = probe(a);
      if (!std::isfinite(cur.f)) {
        a = 0.5 * (prev.a + a);
        continue;
      }
      if (cur.f > f0_ + c1 * a * dphi0_ || (i > 0 && cur.f >= prev.f)) return zoom(prev, cur);
      if (std::abs(cur.dphi) <= -c2 * dphi0_) return cur;
      if (cur.dphi >= 0.0) return zoom(cur, prev);
      prev = std::move(cur);
      a *= 2.0;
    }
    return prev.a > 0.0 ? std::optional<Probe>(prev) : std::nullopt;
  }

  long evaluations = 0;

private:
  static constexpr double c1 = 1e-4;
  static constexpr double c2 = 0.9;

  Probe probe(double a) {
    Probe p;
    p.a = a;
    p.x.resize(x0_.size());
    for (std::size_t i = 0; i < x0_.size(); ++i) p.x[i] = x0_[i] + a * dir_[i];
    p.f = f_(p.x);
    ++evaluations;
    p.g.assign(x0_.size(), 0.0);
    if (std::isfinite(p.f)) g_(p.x, p.g);
    p.dphi = dot(p.g, dir_);
    return p;
  }

  std::optional<Probe> zoom(Probe lo, Probe hi) {
    for (int j = 0; j < 40; ++j) {
      const double width = hi.a - lo.a;
      if (std::abs(width) <= 1e-14 * std::max(1.0, std::abs(lo.a))) break;
      double a = cubic_min(lo, hi);
      const double left = std::min(lo.a, hi.a), right = std::max(lo.a, hi.a);
      const double guard = 0.1 * (right - left);
      if (!std::isfinite(a) || a < left + guard || a > right - guard) a = 0.5 * (lo.a + hi.a);
      Probe cur = probe(a);
      if (!std::isfinite(cur.f) || cur.f > f0_ + c1 * a * dphi0_ || cur.f >= lo.f) {
        hi = std::move(cur);
      } else {
        if (std::abs(cur.dphi) <= -c2 * dphi0_) return cur;
        if (cur.dphi * (hi.a - lo.a) >= 0.0) hi = lo;
        lo = std::move(cur);
      }
    }
    // Sufficient decrease still holds at lo; accept it if it moved.
    if (lo.a > 0.0 && lo.f < f0_) return lo;
    return std::nullopt;
  }

  const CostFn& f_;
  const GradFn& g_;
  std::span<const double> x0_;
  std::span<const double> dir_;
  double f0_;
  double dphi0_;
};

}  // namespace

FlatResult bfgs(const CostFn& f_in, const GradFn& grad_in, std::vector<double> x0,
                const OptConfig& config) {
  if (config.max_iterations < 0 || !(config.gradient_tolerance > 0.0) ||
      !(config.step_tolerance > 0.0)) {
    throw std::invalid_argument("optimizer tolerances must be positive");
  }
  long evals = 0;
  const CostFn f = [&](std::span<const double> x) {
    ++evals;
    return f_in(x);
  };
  const GradFn g = grad_in ? grad_in : GradFn([&](std::span<const double> x, std::span<double> out) {
    const auto gd = central_difference(f, x);
    std::copy(gd.begin(), gd.end(), out.begin());
  });

  const std::size_t n = x0.size();
  FlatResult r;
  r.x = std::move(x0);
  r.cost = f(r.x);
  if (!std::isfinite(r.cost)) throw std::invalid_argument("cost is not finite at the initial point");
  r.history.push_back(r.cost);
  std::vector<double> gk(n, 0.0);
  g(r.x, gk);

  using Mat = Eigen::MatrixXd;
  using Vec = Eigen::VectorXd;
  Mat h = Mat::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  bool fresh = true;  // h is still the (unscaled) identity

  r.stop_reason = "max_iterations";
  for (; r.iterations < config.max_iterations; ++r.iterations) {
    r.gradient_norm = max_abs(gk);
    if (n == 0 || r.gradient_norm <= config.gradient_tolerance) {
      r.converged = true;
      r.stop_reason = "gradient_tolerance";
      break;
    }
    if (config.stop_at_cost && r.cost <= *config.stop_at_cost) {
      r.converged = true;
      r.stop_reason = "target_cost";
      break;
    }
    const Eigen::Map<const Vec> gv(gk.data(), static_cast<Eigen::Index>(n));
    Vec d = -(h * gv);
    if (!(d.dot(gv) < 0.0)) {
      h.setIdentity();
      fresh = true;
      d = -gv;
    }
    std::vector<double> dir(d.data(), d.data() + n);
    const double a0 = fresh ? std::min(1.0, 1.0 / max_abs(dir)) : 1.0;
    LineSearch ls(f, g, r.x, r.cost, gk, dir);
    auto step = ls.run(a0);
    if (!step && !fresh) {
      h.setIdentity();
      fresh = true;
      continue;  // retry along steepest descent
    }
    if (!step) {
      r.stop_reason = "line_search_failed";
      break;
    }
    Vec s(static_cast<Eigen::Index>(n)), y(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = step->x[i] - r.x[i];
      y[i] = step->g[i] - gk[i];
    }
    r.x = std::move(step->x);
    gk = std::move(step->g);
    r.cost = step->f;
    r.history.push_back(r.cost);

    if (s.lpNorm<Eigen::Infinity>() <= config.step_tolerance) {
      r.converged = true;
      r.stop_reason = "step_tolerance";
      ++r.iterations;
      break;
    }
    const double sy = s.dot(y);
    if (sy > 1e-16 * s.norm() * y.norm()) {
      if (fresh) {
        h *= sy / y.squaredNorm();
        fresh = false;
      }
      const double rho = 1.0 / sy;
      const Vec hy = h * y;
      const double yhy = y.dot(hy);
      h += (rho * rho * yhy + rho) * (s * s.transpose()) -
           rho * (hy * s.transpose() + s * hy.transpose());
    }
  }
  r.gradient_norm = max_abs(gk);
  r.evaluations = evals;
  return r;
}

OptResult minimize(const CircuitCost& cost, const ParameterVector& init, const OptConfig& config) {
  check_layout(cost.circuit(), init);
  const std::size_t nx = cost.circuit().x_size();
  const CostFn f = flat_cost(cost);
  GradFn g;
  if (config.gradient_mode == GradientMode::parameter_shift) {
    g = [&cost, nx](std::span<const double> v, std::span<double> out) {
      const auto gd = parameter_shift(cost, ParameterVector::from_flat(v, nx));
      std::copy(gd.begin(), gd.end(), out.begin());
    };
  }
  auto fr = bfgs(f, g, init.flat(), config);
  OptResult r;
  r.best_params = ParameterVector::from_flat(fr.x, nx);
  r.best_cost = fr.cost;
  r.final_gradient_norm = fr.gradient_norm;
  r.iterations = fr.iterations;
  r.converged = fr.converged;
  r.stop_reason = fr.stop_reason;
  r.per_start_costs = {fr.cost};
  r.cost_history = std::move(fr.history);
  r.evaluations = fr.evaluations;
  return r;
}

// ---------------------------------------------------------------- multistart

ParameterVector draw_start(const CircuitSpec& circuit, const OptConfig& config, int k) {
  std::seed_seq seq{static_cast<std::uint32_t>(config.seed),
                    static_cast<std::uint32_t>(config.seed >> 32), static_cast<std::uint32_t>(k)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ParameterVector p;
  p.x.resize(circuit.x_size());
  for (auto& v : p.x) v = config.x_init_scale * u(rng);
  p.y = circuit.resource_reference;
  for (auto& v : p.y) v += config.init_scale * u(rng);
  return p;
}

OptResult multistart_minimize(const CircuitCost& cost, const OptConfig& config,
                              const std::optional<ParameterVector>& warm) {
  if (config.n_starts < 1) throw std::invalid_argument("n_starts must be >= 1");
  if (warm) check_layout(cost.circuit(), *warm);
  const auto n = static_cast<std::size_t>(config.n_starts);
  std::vector<OptResult> runs(n);
  parallel_for(n, worker_count(config.threads), [&](std::size_t k) {
    const auto init = (k == 0 && warm) ? *warm : draw_start(cost.circuit(), config, static_cast<int>(k));
    runs[k] = minimize(cost, init, config);
  });
  std::size_t best = 0;
  for (std::size_t k = 1; k < n; ++k) {
    if (runs[k].best_cost < runs[best].best_cost) best = k;
  }
  OptResult r = runs[best];
  r.best_start = static_cast<int>(best);
  r.per_start_costs.clear();
  r.evaluations = 0;
  for (const auto& run : runs) {
    r.per_start_costs.push_back(run.best_cost);
    r.evaluations += run.evaluations;
  }
  return r;
}

// ---------------------------------------------------------------- symmetry

std::vector<int> resource_permutation(const CircuitSpec& circuit, const Permutation& sites) {
  using Kind = ResourceCoordinate::Kind;
  const auto& res = circuit.resources;
  std::vector<int> out(res.size(), -1);
  for (std::size_t i = 0; i < res.size(); ++i) {
    const auto& r = res[i];
    if (r.kind == Kind::coupling_class) {
      out[i] = static_cast<int>(i);
      continue;
    }
    const int a = sites.at(r.a);
    const int b = r.b < 0 ? -1 : sites.at(r.b);
    for (std::size_t j = 0; j < res.size(); ++j) {
      const auto& q = res[j];
      if (q.kind != r.kind) continue;
      const bool hit = r.b < 0 ? q.a == a
                               : ((q.a == a && q.b == b) || (q.a == b && q.b == a));
      if (hit) {
        out[i] = static_cast<int>(j);
        break;
      }
    }
    if (out[i] < 0) {
      throw std::invalid_argument("site permutation does not map resource " + r.name);
    }
  }
  return out;
}

SymmetryReport symmetry_report(const ParameterVector& params, const CircuitCost& cost,
                               const LatticeGeometry& geometry) {
  const auto& c = cost.circuit();
  check_layout(c, params);
  const auto group = symmetry_group(geometry);
  SymmetryReport rep;
  const std::size_t ny = params.y.size();
  std::vector<double> avg(params.y);
  std::size_t used = 1;
  for (std::size_t gi = 0; gi < group.size(); ++gi) {
    std::vector<int> perm;
    try {
      perm = resource_permutation(c, group[gi]);
    } catch (const std::invalid_argument&) {
      continue;  // not a symmetry of this circuit's resource layout
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < ny; ++i) {
      const double d = params.y[i] - params.y[perm[i]];
      acc += d * d;
      avg[i] += params.y[perm[i]];
    }
    ++used;
    rep.names.push_back("g" + std::to_string(gi));
    rep.deviations.push_back(ny ? std::sqrt(acc / static_cast<double>(ny)) : 0.0);
  }
  for (auto& v : avg) v /= static_cast<double>(used);
  rep.symmetrized_y = avg;
  rep.cost = cost(params);
  ParameterVector sym{params.x, avg};
  rep.symmetrized_cost = cost(sym);
  return rep;
}

// ---------------------------------------------------------------- threads

namespace {
thread_local bool inside_worker = false;
}

int worker_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("LAB_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
  const std::size_t w = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, workers)));
  if (w <= 1 || inside_worker) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < w; ++t) {
    pool.emplace_back([&] {
      inside_worker = true;
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// ---------------------------------------------------------------- names

std::string to_string(Objective o) {
  return o == Objective::infidelity ? "infidelity" : "energy";
}

Objective objective_from_string(const std::string& s) {
  if (s == "infidelity") return Objective::infidelity;
  if (s == "energy") return Objective::energy;
  throw std::invalid_argument("unknown objective '" + s + "'");
}

std::string to_string(GradientMode g) {
  return g == GradientMode::central_difference ? "central_difference" : "parameter_shift";
}

GradientMode gradient_mode_from_string(const std::string& s) {
  if (s == "central_difference") return GradientMode::central_difference;
  if (s == "parameter_shift") return GradientMode::parameter_shift;
  throw std::invalid_argument("unknown gradient mode '" + s + "'");
}

}  // namespace qlab
