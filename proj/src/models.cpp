#include "qlab/models.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace qlab {

namespace {

// 53-bit uniform double in [0, 1) from one engine output.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::mt19937_64 stream_for(std::uint64_t seed, std::uint64_t sample) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(sample),
                    static_cast<std::uint32_t>(sample >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

IsingWeights draw_random_ising_weights(const LatticeGeometry& geometry, double disorder,
                                       std::uint64_t seed, std::uint64_t sample) {
  if (!(disorder >= 0.0 && disorder <= 2.0)) {
    throw std::invalid_argument("disorder strength D must lie in [0, 2]");
  }
  const double lo = (2.0 - disorder) / 2.0;
  const double width = disorder;
  auto rng = stream_for(seed, sample);
  IsingWeights w;
  for (std::size_t e = 0; e < geometry.edges.size(); ++e) {
    w.couplings.push_back(lo + width * unit_uniform(rng));
  }
  for (int i = 0; i < geometry.n_sites; ++i) {
    w.fields.push_back(lo + width * unit_uniform(rng));
  }
  return w;
}

WeightedPauliSum ising_hamiltonian(const LatticeGeometry& geometry, const IsingWeights& w) {
  const int n = geometry.n_sites;
  if (w.couplings.size() != geometry.edges.size()) {
    throw std::invalid_argument("one coupling per edge required");
  }
  if (!w.fields.empty() && static_cast<int>(w.fields.size()) != n) {
    throw std::invalid_argument("one field per site required");
  }
  WeightedPauliSum h(n);
  for (std::size_t e = 0; e < geometry.edges.size(); ++e) {
    const auto [a, b] = geometry.edges[e];
    h.add(PauliString::pair(n, a, 'Z', b, 'Z', -w.couplings[e]));
  }
  for (std::size_t i = 0; i < w.fields.size(); ++i) {
    h.add(PauliString::single(n, static_cast<int>(i), 'X', -w.fields[i]));
  }
  return h;
}

WeightedPauliSum build_hamiltonian(ModelKind model, const LatticeGeometry& geometry,
                                   const ModelParams& params) {
  const int n = geometry.n_sites;
  switch (model) {
    case ModelKind::tfim: {
      if (!(params.lambda > 0.0)) throw std::invalid_argument("tfim needs lambda > 0");
      IsingWeights w;
      w.couplings.assign(geometry.edges.size(), 1.0);
      w.fields.assign(n, params.lambda);
      return ising_hamiltonian(geometry, w);
    }
    case ModelKind::ferro_ising: {
      IsingWeights w;
      w.couplings.assign(geometry.edges.size(), 1.0);
      return ising_hamiltonian(geometry, w);
    }
    case ModelKind::random_ising: {
      if (!params.seed) throw std::invalid_argument("random_ising needs a seed");
      return ising_hamiltonian(
          geometry,
          draw_random_ising_weights(geometry, params.disorder, *params.seed, params.sample));
    }
    case ModelKind::heisenberg: {
      WeightedPauliSum h(n);
      for (const auto& [a, b] : geometry.edges) {
        for (char l : {'X', 'Y', 'Z'}) h.add(PauliString::pair(n, a, l, b, l, 1.0));
      }
      return h;
    }
  }
  throw std::invalid_argument("unknown model");
}

IsingWeights ising_weights_of(const WeightedPauliSum& h, const LatticeGeometry& geometry) {
  const int n = geometry.n_sites;
  if (h.n_qubits() != n) throw std::invalid_argument("hamiltonian/geometry size mismatch");
  IsingWeights w;
  for (const auto& [a, b] : geometry.edges) {
    w.couplings.push_back(-h.coefficient_of(PauliString::pair(n, a, 'Z', b, 'Z', 1.0)));
  }
  for (int i = 0; i < n; ++i) {
    w.fields.push_back(-h.coefficient_of(PauliString::single(n, i, 'X', 1.0)));
  }
  return w;
}

WeightedPauliSum HamiltonianSplit::sum() const {
  if (parts.empty()) throw std::logic_error("empty split");
  WeightedPauliSum total(parts.front().n_qubits());
  for (const auto& p : parts) total += p;
  return total;
}

HamiltonianSplit split_hamiltonian(const WeightedPauliSum& h, SplitScheme scheme) {
  const int n = h.n_qubits();
  HamiltonianSplit split;
  if (scheme == SplitScheme::ising_m2) {
    WeightedPauliSum xs(n), zzs(n);
    for (const auto& t : h.terms()) {
      const auto s = t.support();
      if (s.size() == 1 && t.letter(s[0]) == 'X') {
        xs.add(t);
      } else if (s.size() == 2 && t.letter(s[0]) == 'Z' && t.letter(s[1]) == 'Z') {
        zzs.add(t);
      } else {
        throw std::invalid_argument("ising_m2 split accepts only X and ZZ terms, got " +
                                    t.letters());
      }
    }
    split.parts = {xs, zzs};
    split.labels = {"x_field", "zz"};
    return split;
  }

  if (n % 2 != 0) throw std::invalid_argument("heisenberg_m4 split needs even N");
  WeightedPauliSum even_xy(n), even_z(n), odd_xy(n), odd_z(n);
  for (const auto& t : h.terms()) {
    const auto s = t.support();
    if (s.size() != 2) {
      throw std::invalid_argument("heisenberg_m4 split accepts only two-site terms");
    }
    const char l = t.letter(s[0]);
    if (t.letter(s[1]) != l) {
      throw std::invalid_argument("heisenberg_m4 split needs XX, YY or ZZ terms");
    }
    bool even;
    if (s[1] == s[0] + 1) {
      even = s[0] % 2 == 0;
    } else if (s[0] == 0 && s[1] == n - 1 && n > 2) {
      even = false;
    } else {
      throw std::invalid_argument("heisenberg_m4 split needs nearest-neighbour chain bonds");
    }
    if (l == 'Z') {
      (even ? even_z : odd_z).add(t);
    } else {
      (even ? even_xy : odd_xy).add(t);
    }
  }
  split.parts = {even_xy, even_z, odd_xy, odd_z};
  split.labels = {"even_xy", "even_z", "odd_xy", "odd_z"};
  return split;
}

std::string to_string(ModelKind m) {
  switch (m) {
    case ModelKind::tfim: return "tfim";
    case ModelKind::random_ising: return "random_ising";
    case ModelKind::heisenberg: return "heisenberg";
    case ModelKind::ferro_ising: return "ferro_ising";
  }
  return "?";
}

ModelKind model_kind_from_string(const std::string& s) {
  for (auto m : {ModelKind::tfim, ModelKind::random_ising, ModelKind::heisenberg,
                 ModelKind::ferro_ising}) {
    if (to_string(m) == s) return m;
  }
  throw std::invalid_argument("unknown model '" + s + "'");
}

}  // namespace qlab
