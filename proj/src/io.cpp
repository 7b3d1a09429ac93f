#include "qlab/io.hpp"

#include <fstream>
#include <stdexcept>

namespace qlab {

json to_json(const LatticeGeometry& g) {
  json j;
  j["kind"] = to_string(g.kind);
  j["boundary"] = to_string(g.boundary);
  j["n_sites"] = g.n_sites;
  j["edges"] = g.edges;
  if (!g.edge_classes.empty()) j["edge_classes"] = g.edge_classes;
  if (!g.site_classes.empty()) j["site_classes"] = g.site_classes;
  if (!g.positions.empty()) j["positions"] = g.positions;
  j["symmetries"] = g.symmetry_names;
  return j;
}

json to_json(const WeightedPauliSum& h) {
  json terms = json::array();
  for (const auto& t : h.terms()) terms.push_back({{"pauli", t.letters()}, {"coeff", t.coefficient()}});
  return {{"n_qubits", h.n_qubits()}, {"terms", terms}};
}

json to_json(const ParameterVector& p) { return {{"x", p.x}, {"y", p.y}}; }

json to_json(const OptResult& r) {
  return {{"best_params", to_json(r.best_params)},
          {"best_cost", r.best_cost},
          {"final_gradient_norm", r.final_gradient_norm},
          {"iterations", r.iterations},
          {"converged", r.converged},
          {"stop_reason", r.stop_reason},
          {"best_start", r.best_start},
          {"per_start_costs", r.per_start_costs},
          {"evaluations", r.evaluations}};
}

json to_json(const std::vector<Gate>& gates) {
  json out = json::array();
  for (const auto& g : gates) out.push_back({{"gate", g.name}, {"qubits", g.qubits}, {"angle", g.angle}});
  return out;
}

json to_json(const DressedAtomArray& a) {
  json couplings = json::array();
  for (int i = 0; i < a.size(); ++i) {
    for (int j = i + 1; j < a.size(); ++j) {
      couplings.push_back({{"i", i}, {"j", j}, {"v", dressed_coupling(a, i, j)}});
    }
  }
  return {{"positions", a.positions}, {"species", a.species}, {"v0", a.v0}, {"rc", a.rc},
          {"couplings", couplings}};
}

json to_json(const PowerLawFit& f) {
  return {{"exponent", f.exponent}, {"prefactor", f.prefactor}, {"r_squared", f.r_squared}};
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + tmp.string());
    os << content;
    os.flush();
    if (!os) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

}  // namespace qlab
