#include "qlab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "qlab/open_system.hpp"
#include "qlab/oracle.hpp"
#include "qlab/rydberg.hpp"

namespace qlab {

namespace {

const json& require_object(const json& j, const char* what) {
  if (!j.is_object()) throw ConfigError(std::string(what) + " must be a JSON object");
  return j;
}

void reject_unknown(const json& j, const std::set<std::string>& allowed, const char* where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw ConfigError(std::string("unknown key '") + it.key() + "' in " + where);
    }
  }
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

template <class F>
auto wrap(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::vector<int> parse_depths(const json& j) {
  std::vector<int> d;
  if (j.is_array()) {
    for (const auto& v : j) {
      if (!v.is_number_integer()) throw ConfigError("depths must be integers");
      d.push_back(v.get<int>());
    }
  } else if (j.is_object()) {
    reject_unknown(j, {"from", "to"}, "depths");
    const int from = get_or(j, "from", 1), to = get_or(j, "to", 1);
    for (int p = from; p <= to; ++p) d.push_back(p);
  } else if (j.is_number_integer()) {
    d.push_back(j.get<int>());
  } else {
    throw ConfigError("depths must be a list, a {from, to} range or an integer");
  }
  if (d.empty()) throw ConfigError("depths is empty");
  for (int p : d) {
    if (p < 1) throw ConfigError("depths must be >= 1");
  }
  return d;
}

OptConfig parse_optimizer(const json& j) {
  require_object(j, "optimizer");
  reject_unknown(j,
                 {"max_iterations", "gradient_tolerance", "step_tolerance", "n_starts",
                  "init_scale", "x_init_scale", "seed", "gradient_mode", "stop_at_cost", "threads"},
                 "optimizer");
  OptConfig c;
  c.max_iterations = get_or(j, "max_iterations", c.max_iterations);
  c.gradient_tolerance = get_or(j, "gradient_tolerance", c.gradient_tolerance);
  c.step_tolerance = get_or(j, "step_tolerance", c.step_tolerance);
  c.n_starts = get_or(j, "n_starts", c.n_starts);
  c.init_scale = get_or(j, "init_scale", c.init_scale);
  c.x_init_scale = get_or(j, "x_init_scale", c.x_init_scale);
  c.seed = get_or<std::uint64_t>(j, "seed", c.seed);
  c.threads = get_or(j, "threads", c.threads);
  if (j.contains("gradient_mode")) {
    c.gradient_mode = wrap([&] { return gradient_mode_from_string(j["gradient_mode"].get<std::string>()); });
  }
  if (j.contains("stop_at_cost")) c.stop_at_cost = get_or(j, "stop_at_cost", 0.0);
  if (c.max_iterations < 0) throw ConfigError("max_iterations must be >= 0");
  if (!(c.gradient_tolerance > 0) || !(c.step_tolerance > 0)) {
    throw ConfigError("optimizer tolerances must be positive");
  }
  if (c.n_starts < 1) throw ConfigError("n_starts must be >= 1");
  if (!(c.init_scale >= 0) || !(c.x_init_scale >= 0)) throw ConfigError("init scales must be >= 0");
  return c;
}

bool is_heisenberg_arm(AnsatzScheme s) {
  return s == AnsatzScheme::conventional_heisenberg || s == AnsatzScheme::prh_heisenberg;
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
  require_object(j, "config");
  reject_unknown(j,
                 {"experiment", "geometry", "model", "ansatz", "depths", "objective", "optimizer",
                  "samples", "seed", "fixed_parameters", "gammas", "dt", "m", "output",
                  "full_size", "description"},
                 "config");
  if (!j.contains("experiment")) throw ConfigError("missing 'experiment'");
  ExperimentConfig c;
  c.experiment = wrap([&] { return experiment_kind_from_string(get_or<std::string>(j, "experiment", "")); });
  const bool full = get_or(j, "full_size", false);
  c.output = get_or<std::string>(j, "output", "results/" + to_string(c.experiment) + ".csv");

  // Per-experiment defaults.
  switch (c.experiment) {
    case ExperimentKind::gs_sweep:
      c.size = {full ? 12 : 8};
      c.arms = {AnsatzScheme::conventional_ising};
      break;
    case ExperimentKind::heisenberg_sweep:
      c.size = {full ? 12 : 8};
      c.model = ModelKind::heisenberg;
      c.arms = {AnsatzScheme::conventional_heisenberg};
      break;
    case ExperimentKind::disorder:
      c.size = {full ? 12 : 8};
      c.model = ModelKind::random_ising;
      c.disorder = 1.0;
      c.samples = 10;
      c.arms = {AnsatzScheme::conventional_ising, AnsatzScheme::prh_ising};
      break;
    case ExperimentKind::ghz_sweep:
      c.geometry = GeometryKind::cross;
      c.size = {1};
      c.model = ModelKind::ferro_ising;
      c.arms = {AnsatzScheme::prh_ising_classes};
      break;
    case ExperimentKind::lindblad:
      c.gammas = {3e-3, 5e-3, 7e-3, 1e-2, 2e-2, 3e-2};
      c.ms = {1};
      break;
    case ExperimentKind::rydberg_check:
      c.ms = {1, 2, 3};
      break;
  }
  c.depths = {1, 2, 3, 4};

  if (j.contains("geometry")) {
    const auto& g = require_object(j["geometry"], "geometry");
    reject_unknown(g, {"kind", "size", "boundary", "inter_arm_edges"}, "geometry");
    if (g.contains("kind")) {
      c.geometry = wrap([&] { return geometry_kind_from_string(g["kind"].get<std::string>()); });
      if (!g.contains("size")) c.size.clear();
    }
    if (g.contains("size")) {
      const auto& s = g["size"];
      c.size = s.is_array() ? get_or<std::vector<int>>(g, "size", {}) : std::vector<int>{get_or(g, "size", 0)};
    }
    if (g.contains("boundary")) {
      c.boundary = wrap([&] { return boundary_from_string(g["boundary"].get<std::string>()); });
    }
    c.inter_arm_edges = get_or(g, "inter_arm_edges", c.inter_arm_edges);
  }
  if (j.contains("model")) {
    const auto& m = require_object(j["model"], "model");
    reject_unknown(m, {"kind", "lambda", "disorder"}, "model");
    if (m.contains("kind")) c.model = wrap([&] { return model_kind_from_string(m["kind"].get<std::string>()); });
    c.lambda = get_or(m, "lambda", c.lambda);
    c.disorder = get_or(m, "disorder", c.disorder);
  }
  if (j.contains("ansatz")) {
    const auto& a = j["ansatz"];
    std::vector<std::string> names;
    if (a.is_string()) {
      names = {a.get<std::string>()};
    } else {
      names = get_or<std::vector<std::string>>(j, "ansatz", {});
    }
    c.arms.clear();
    for (const auto& s : names) c.arms.push_back(wrap([&] { return ansatz_scheme_from_string(s); }));
    if (c.arms.empty()) throw ConfigError("ansatz list is empty");
  }
  if (j.contains("depths")) c.depths = parse_depths(j["depths"]);
  if (j.contains("objective")) {
    c.objective = wrap([&] { return objective_from_string(j["objective"].get<std::string>()); });
  }
  if (j.contains("optimizer")) c.optimizer = parse_optimizer(j["optimizer"]);
  c.samples = get_or(j, "samples", c.samples);
  c.seed = get_or<std::uint64_t>(j, "seed", c.seed);
  c.fixed_parameters = get_or(j, "fixed_parameters", c.fixed_parameters);
  c.gammas = get_or(j, "gammas", c.gammas);
  c.dt = get_or(j, "dt", c.dt);
  if (j.contains("m")) {
    c.ms = j["m"].is_array() ? get_or<std::vector<int>>(j, "m", {}) : std::vector<int>{get_or(j, "m", 1)};
  }

  // Consistency.
  if (c.samples < 1) throw ConfigError("samples must be >= 1");
  if (!(c.dt > 0)) throw ConfigError("dt must be positive");
  for (int m : c.ms) {
    if (m < 1 || m > 3) throw ConfigError("m must be 1, 2 or 3");
  }
  if (c.experiment == ExperimentKind::lindblad) {
    if (c.gammas.empty()) throw ConfigError("gammas is empty");
    for (double g : c.gammas) {
      if (!(g >= 0) || !std::isfinite(g)) throw ConfigError("gammas must be finite and >= 0");
    }
    return c;
  }
  if (c.experiment == ExperimentKind::rydberg_check) return c;

  const bool heis_model = c.model == ModelKind::heisenberg;
  std::set<AnsatzScheme> seen;
  for (auto a : c.arms) {
    if (!seen.insert(a).second) throw ConfigError("duplicate ansatz arm " + to_string(a));
    if (a == AnsatzScheme::prh_ising_classes && c.geometry != GeometryKind::cross) {
      throw ConfigError("prh_ising_classes needs the cross geometry");
    }
    if (is_heisenberg_arm(a) != heis_model) {
      throw ConfigError("ansatz " + to_string(a) + " does not fit model " + to_string(c.model));
    }
  }
  if (c.experiment == ExperimentKind::ghz_sweep && c.model != ModelKind::ferro_ising) {
    throw ConfigError("ghz_sweep targets the ferro_ising ground state");
  }
  if (c.experiment == ExperimentKind::disorder && c.model != ModelKind::random_ising) {
    throw ConfigError("disorder experiments use the random_ising model");
  }
  if (c.fixed_parameters) {
    if (c.experiment != ExperimentKind::ghz_sweep || c.geometry != GeometryKind::cross ||
        c.arms != std::vector<AnsatzScheme>{AnsatzScheme::prh_ising_classes}) {
      throw ConfigError("fixed_parameters needs ghz_sweep on the cross with prh_ising_classes");
    }
    if (c.size.size() != 1 || c.size[0] < 1 || c.size[0] > 3) {
      throw ConfigError("fixed_parameters needs cross size m in 1..3");
    }
    if (!j.contains("depths")) c.depths = {c.size[0] + 1};
    if (c.depths != std::vector<int>{c.size[0] + 1}) {
      throw ConfigError("fixed parameters exist only at depth m + 1");
    }
  }
  const auto g = wrap([&] { return config_geometry(c); });
  if (g.n_sites > 20) throw ConfigError("system too large for statevector runs");
  return c;
}

LatticeGeometry config_geometry(const ExperimentConfig& c) {
  auto g = build_geometry(c.geometry, c.size, c.boundary);
  if (c.geometry == GeometryKind::cross && c.inter_arm_edges) g = with_inter_arm_edges(g);
  return g;
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct Target {
  WeightedPauliSum h;
  StateVector state;
  std::optional<IsingWeights> weights;
  bool disordered = false;
};

Target make_target(const ExperimentConfig& c, const LatticeGeometry& g, int sample) {
  ModelParams mp;
  mp.lambda = c.lambda;
  mp.disorder = c.disorder;
  mp.seed = c.seed;
  mp.sample = static_cast<std::uint64_t>(sample);
  Target t{build_hamiltonian(c.model, g, mp), {}, std::nullopt, false};
  if (c.experiment == ExperimentKind::ghz_sweep) {
    t.state = ghz_state(g.n_sites);  // unit-weight mixing circuit
  } else {
    t.state = exact_ground_state(t.h).state;
    if (c.model != ModelKind::heisenberg) t.weights = ising_weights_of(t.h, g);
    t.disordered = c.model == ModelKind::random_ising;
  }
  return t;
}

std::optional<AnsatzScheme> partner_of(AnsatzScheme prh, const std::vector<AnsatzScheme>& arms) {
  const AnsatzScheme conv = prh == AnsatzScheme::prh_heisenberg ? AnsatzScheme::conventional_heisenberg
                                                                : AnsatzScheme::conventional_ising;
  if (std::find(arms.begin(), arms.end(), conv) != arms.end()) return conv;
  return std::nullopt;
}

std::vector<AnsatzScheme> ordered_arms(std::vector<AnsatzScheme> arms) {
  std::stable_partition(arms.begin(), arms.end(), [](AnsatzScheme a) { return !is_prh(a); });
  return arms;
}

std::vector<ExperimentRecord> run_item(const ExperimentConfig& c, const LatticeGeometry& g,
                                       const Target& t, int p, int sample) {
  std::vector<ExperimentRecord> out;
  std::map<AnsatzScheme, std::pair<ParameterVector, double>> done;  // params, fidelity
  for (auto arm : ordered_arms(c.arms)) {
    const auto t0 = Clock::now();
    AnsatzOptions ao;
    ao.target_weights = t.weights;
    ao.target_is_disordered = t.disordered;
    const auto circuit = build_ansatz(g, arm, p, ao);
    CircuitCost cost = c.objective == Objective::infidelity
                           ? make_cost(circuit, Objective::infidelity, t.state)
                           : make_cost(circuit, Objective::energy, t.h);
    if (c.objective == Objective::energy) cost.with_reference(t.state);

    ExperimentRecord rec;
    rec.experiment = to_string(c.experiment);
    rec.model = to_string(c.model);
    rec.n = g.n_sites;
    rec.boundary = to_string(g.boundary);
    rec.p = p;
    rec.sample = sample;
    rec.seed = c.seed;
    rec.objective = to_string(c.objective);
    rec.ansatz = to_string(arm);

    if (c.fixed_parameters) {
      rec.params = fixed_ghz_cross_params(c.size[0]);
      rec.best_cost = cost(rec.params);
      rec.iterations = 0;
    } else {
      OptConfig oc = c.optimizer;
      oc.seed = c.optimizer.seed * 1000003ULL + static_cast<std::uint64_t>(p) * 1009ULL +
                static_cast<std::uint64_t>(sample);
      std::optional<ParameterVector> warm;
      const auto partner = is_prh(arm) ? partner_of(arm, c.arms) : std::nullopt;
      if (partner && arm != AnsatzScheme::prh_ising_classes) {
        warm = ParameterVector{done.at(*partner).first.x, circuit.resource_reference};
      }
      const auto res = multistart_minimize(cost, oc, warm);
      rec.params = res.best_params;
      rec.best_cost = res.best_cost;
      rec.iterations = res.iterations;
      rec.extra = {{"optimizer", to_json(res)}};
    }
    rec.fidelity = *cost.fidelity(rec.params);
    if (is_prh(arm)) {
      if (const auto partner = partner_of(arm, c.arms)) {
        const double fc = done.at(*partner).second;
        if (fc < 1.0) rec.r = improvement_ratio(fc, rec.fidelity);
      }
    }
    done[arm] = {rec.params, rec.fidelity};
    rec.wall_ms = ms_since(t0);
    out.push_back(std::move(rec));
  }
  return out;
}

json record_json(const ExperimentRecord& r) {
  json j = {{"experiment", r.experiment}, {"model", r.model},     {"N", r.n},
            {"boundary", r.boundary},     {"p", r.p},             {"sample", r.sample},
            {"seed", r.seed},             {"objective", r.objective}, {"ansatz", r.ansatz},
            {"best_cost", r.best_cost},   {"fidelity", r.fidelity}, {"wall_ms", r.wall_ms},
            {"iterations", r.iterations}, {"params", to_json(r.params)}};
  j["R"] = r.r ? json(*r.r) : json(nullptr);
  if (!r.extra.is_null()) j["extra"] = r.extra;
  return j;
}

ExperimentOutput run_sweep(const ExperimentConfig& c) {
  const auto g = config_geometry(c);
  std::vector<Target> targets;
  for (int s = 0; s < c.samples; ++s) targets.push_back(make_target(c, g, s));

  const std::size_t items = c.depths.size() * static_cast<std::size_t>(c.samples);
  std::vector<std::vector<ExperimentRecord>> parts(items);
  parallel_for(items, worker_count(c.optimizer.threads), [&](std::size_t i) {
    const int p = c.depths[i / c.samples];
    const int s = static_cast<int>(i % c.samples);
    parts[i] = run_item(c, g, targets[s], p, s);
  });

  ExperimentOutput out;
  for (auto& part : parts) {
    for (auto& r : part) out.records.push_back(std::move(r));
  }
  out.csv = records_to_csv(out.records);
  out.sidecar["geometry"] = to_json(g);
  json recs = json::array();
  for (const auto& r : out.records) recs.push_back(record_json(r));
  out.sidecar["records"] = recs;

  // Per-depth means over samples (disorder averaging).
  json summary = json::array();
  for (int p : c.depths) {
    for (auto arm : c.arms) {
      double cost = 0, fid = 0, rsum = 0;
      int count = 0, rcount = 0;
      for (const auto& r : out.records) {
        if (r.p != p || r.ansatz != to_string(arm)) continue;
        cost += r.best_cost;
        fid += r.fidelity;
        ++count;
        if (r.r) {
          rsum += *r.r;
          ++rcount;
        }
      }
      json row = {{"p", p}, {"ansatz", to_string(arm)}, {"mean_best_cost", cost / count},
                  {"mean_fidelity", fid / count}, {"samples", count}};
      row["mean_R"] = rcount ? json(rsum / rcount) : json(nullptr);
      summary.push_back(row);
    }
  }
  out.sidecar["summary"] = summary;
  return out;
}

ExperimentOutput run_lindblad(const ExperimentConfig& c) {
  const int m = c.ms.empty() ? 1 : c.ms.front();
  std::vector<DampedGhzResult> res(c.gammas.size());
  std::vector<double> wall(c.gammas.size());
  parallel_for(c.gammas.size(), worker_count(c.optimizer.threads), [&](std::size_t i) {
    const auto t0 = Clock::now();
    res[i] = damped_ghz_run(c.gammas[i], m, c.dt);
    wall[i] = ms_since(t0);
  });
  ExperimentOutput out;
  std::ostringstream csv;
  csv << "gamma,infidelity\n";
  char buf[96];
  json points = json::array();
  std::vector<double> gx, gy;
  for (std::size_t i = 0; i < c.gammas.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", c.gammas[i], res[i].infidelity);
    csv << buf;
    points.push_back({{"gamma", c.gammas[i]},
                      {"infidelity", res[i].infidelity},
                      {"trace_error", res[i].trace_error},
                      {"hermiticity_error", res[i].hermiticity_error},
                      {"min_eigenvalue", res[i].min_eigenvalue},
                      {"wall_ms", wall[i]}});
    if (c.gammas[i] > 0 && res[i].infidelity > 0) {
      gx.push_back(c.gammas[i]);
      gy.push_back(res[i].infidelity);
    }
  }
  out.csv = csv.str();
  out.sidecar["points"] = points;
  out.sidecar["m"] = m;
  out.sidecar["dt"] = c.dt;
  if (gx.size() >= 3) {
    out.sidecar["fit"] = to_json(fit_power_law(gx, gy));
  } else {
    out.sidecar["fit"] = nullptr;
  }
  return out;
}

ExperimentOutput run_rydberg(const ExperimentConfig& c) {
  ExperimentOutput out;
  json arrays = json::array();
  for (int m : c.ms) {
    const auto t0 = Clock::now();
    const auto proto = rydberg_ghz_protocol(m);
    ExperimentRecord rec;
    rec.experiment = to_string(c.experiment);
    rec.model = to_string(ModelKind::ferro_ising);
    rec.n = proto.circuit.n_qubits;
    rec.boundary = to_string(Boundary::open);
    rec.p = proto.circuit.depth;
    rec.seed = c.seed;
    rec.objective = to_string(Objective::infidelity);
    rec.ansatz = to_string(proto.circuit.scheme);
    rec.best_cost = 1.0 - proto.fidelity;
    rec.fidelity = proto.fidelity;
    rec.params = proto.params;
    rec.wall_ms = ms_since(t0);

    // Echo check on the centre plus its four neighbours.
    DressedAtomArray frag;
    for (int i : {0, 1, 1 + (m + 1), 1 + 2 * (m + 1), 1 + 3 * (m + 1)}) {
      frag.positions.push_back(proto.array.positions[i]);
      frag.species.push_back(proto.array.species[i]);
    }
    frag.rc = proto.array.rc;
    const auto echo = echo_to_ising(frag, 1.0);
    const auto classes = classify_couplings(proto.array, std::sqrt(2.0));
    rec.extra = {{"echo_deviation", *echo.deviation}, {"coupling_classes", classes.count}};
    arrays.push_back({{"m", m}, {"array", to_json(proto.array)}, {"record", record_json(rec)}});
    out.records.push_back(std::move(rec));
  }
  out.csv = records_to_csv(out.records);
  out.sidecar["protocols"] = arrays;
  return out;
}

}  // namespace

ExperimentOutput run_experiment(const ExperimentConfig& config) {
  switch (config.experiment) {
    case ExperimentKind::lindblad: return run_lindblad(config);
    case ExperimentKind::rydberg_check: return run_rydberg(config);
    default: return run_sweep(config);
  }
}

std::string records_to_csv(const std::vector<ExperimentRecord>& records) {
  std::ostringstream os;
  os << record_csv_header << '\n';
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  for (const auto& r : records) {
    os << r.experiment << ',' << r.model << ',' << r.n << ',' << r.boundary << ',' << r.p << ','
       << r.sample << ',' << r.seed << ',' << r.objective << ',' << r.ansatz << ','
       << num(r.best_cost) << ',' << num(r.fidelity) << ',' << (r.r ? num(*r.r) : "") << ','
       << num(r.wall_ms) << '\n';
  }
  return os.str();
}

void write_outputs(const ExperimentConfig& config, const ExperimentOutput& out) {
  std::filesystem::path csv(config.output);
  auto side = csv;
  side.replace_extension(".json");
  json doc = out.sidecar;
  doc["experiment"] = to_string(config.experiment);
  write_file_atomic(csv, out.csv);
  write_file_atomic(side, doc.dump(2) + "\n");
}

std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::gs_sweep: return "gs_sweep";
    case ExperimentKind::ghz_sweep: return "ghz_sweep";
    case ExperimentKind::disorder: return "disorder";
    case ExperimentKind::lindblad: return "lindblad";
    case ExperimentKind::rydberg_check: return "rydberg_check";
    case ExperimentKind::heisenberg_sweep: return "heisenberg_sweep";
  }
  return "?";
}

ExperimentKind experiment_kind_from_string(const std::string& s) {
  for (auto k : {ExperimentKind::gs_sweep, ExperimentKind::ghz_sweep, ExperimentKind::disorder,
                 ExperimentKind::lindblad, ExperimentKind::rydberg_check,
                 ExperimentKind::heisenberg_sweep}) {
    if (to_string(k) == s) return k;
  }
  throw std::invalid_argument("unknown experiment '" + s + "'");
}

}  // namespace qlab
