#include "qlab/oracle.hpp"

#include <Eigen/Dense>

#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>

namespace qlab {

namespace {

struct CompiledTerm {
  std::uint64_t x;
  std::uint64_t z;
  cplx c;  // coefficient times i^{#Y}
};

std::vector<CompiledTerm> compile(const WeightedPauliSum& h) {
  static const cplx iy[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  std::vector<CompiledTerm> out;
  for (const auto& t : h.terms()) {
    out.push_back({t.x_mask(), t.z_mask(), t.coefficient() * iy[t.y_count() % 4]});
  }
  return out;
}

bool is_real(const WeightedPauliSum& h) {
  for (const auto& t : h.terms()) {
    if (t.y_count() % 2 != 0) return false;
  }
  return true;
}

using Vec = Eigen::VectorXcd;

void apply(const std::vector<CompiledTerm>& terms, const Vec& in, Vec& out) {
  out.setZero(in.size());
  const auto dim = static_cast<std::uint64_t>(in.size());
  for (const auto& t : terms) {
    for (std::uint64_t b = 0; b < dim; ++b) {
      const cplx v = (std::popcount(b & t.z) & 1) ? -in[b] : in[b];
      out[b ^ t.x] += t.c * v;
    }
  }
}

void project_parity(Vec& v) {
  const auto dim = static_cast<std::uint64_t>(v.size());
  const std::uint64_t all = dim - 1;
  for (std::uint64_t b = 0; b < dim / 2; ++b) {
    const cplx s = 0.5 * (v[b] + v[b ^ all]);
    v[b] = s;
    v[b ^ all] = s;
  }
}

void check_parity_symmetric(const WeightedPauliSum& h) {
  const int n = h.n_qubits();
  const PauliString parity(std::string(n, 'X'), 1.0);
  for (const auto& t : h.terms()) {
    if (!t.commutes_with(parity)) {
      throw std::invalid_argument("parity sector requested but H does not conserve parity");
    }
  }
}

struct Eigenpair {
  double value;
  Vec vector;
};

struct LowestTwo {
  Eigenpair ground;
  std::optional<double> next;
};

// Dense path: full matrix, or the +1 parity block in the basis
// (|b> + |~b>)/sqrt2 with qubit 0 clear.
LowestTwo dense_lowest(const WeightedPauliSum& h, Sector sector) {
  const int n = h.n_qubits();
  const auto terms = compile(h);
  const std::uint64_t dim = std::uint64_t{1} << n;
  const std::uint64_t all = dim - 1;
  const bool par = sector == Sector::parity_plus;
  const std::uint64_t red = par ? dim / 2 : dim;

  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(red),
                                              static_cast<Eigen::Index>(red));
  Vec col(static_cast<Eigen::Index>(dim));
  for (std::uint64_t j = 0; j < red; ++j) {
    col.setZero();
    auto act = [&](std::uint64_t b, double amp) {
      for (const auto& t : terms) {
        const double s = (std::popcount(b & t.z) & 1) ? -amp : amp;
        col[b ^ t.x] += t.c * s;
      }
    };
    if (par) {
      act(j, M_SQRT1_2);
      act(j ^ all, M_SQRT1_2);
      for (std::uint64_t i = 0; i < red; ++i) m(i, j) = M_SQRT1_2 * (col[i] + col[i ^ all]);
    } else {
      act(j, 1.0);
      for (std::uint64_t i = 0; i < red; ++i) m(i, j) = col[i];
    }
  }

  Vec ground;
  Eigen::VectorXd values;
  if (is_real(h)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.real());
    if (es.info() != Eigen::Success) throw std::runtime_error("dense eigensolver failed");
    values = es.eigenvalues();
    ground = es.eigenvectors().col(0).cast<cplx>();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
    if (es.info() != Eigen::Success) throw std::runtime_error("dense eigensolver failed");
    values = es.eigenvalues();
    ground = es.eigenvectors().col(0);
  }

  LowestTwo out;
  out.ground.value = values[0];
  if (values.size() > 1) out.next = values[1];
  if (par) {
    out.ground.vector = Vec::Zero(static_cast<Eigen::Index>(dim));
    for (std::uint64_t i = 0; i < red; ++i) {
      out.ground.vector[i] = M_SQRT1_2 * ground[i];
      out.ground.vector[i ^ all] = M_SQRT1_2 * ground[i];
    }
  } else {
    out.ground.vector = ground;
  }
  return out;
}

// Restarted Lanczos with full reorthogonalisation for the lowest eigenpair
// orthogonal to `deflate`.
Eigenpair lanczos(const std::vector<CompiledTerm>& terms, int n, bool par,
                  const std::vector<Vec>& deflate, std::uint64_t seed) {
  const auto dim = static_cast<Eigen::Index>(std::uint64_t{1} << n);
  const Eigen::Index krylov = std::min<Eigen::Index>(par ? dim / 2 : dim, 60);
  constexpr double tol = 1e-11;
  constexpr int max_restarts = 200;

  auto clean = [&](Vec& v) {
    if (par) project_parity(v);
    for (const auto& d : deflate) v -= d * d.dot(v);
  };

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Vec v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = cplx{gauss(rng), 0.0};
  clean(v);
  v.normalize();

  Vec w(dim), ritz(dim), hv(dim);
  double theta = 0.0;
  for (int restart = 0; restart < max_restarts; ++restart) {
    std::vector<Vec> basis{v};
    std::vector<double> alpha, beta;
    for (Eigen::Index j = 0; j < krylov; ++j) {
      apply(terms, basis[j], w);
      clean(w);
      alpha.push_back(basis[j].dot(w).real());
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& b : basis) w -= b * b.dot(w);
      }
      const double bnorm = w.norm();
      if (j + 1 == krylov || bnorm < 1e-13) break;
      beta.push_back(bnorm);
      basis.push_back(w / bnorm);
    }
    const auto k = static_cast<Eigen::Index>(alpha.size());
    Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), k);
    Eigen::VectorXd sub(std::max<Eigen::Index>(k - 1, 0));
    for (Eigen::Index i = 0; i + 1 < k; ++i) sub[i] = beta[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    tri.computeFromTridiagonal(diag, sub);
    theta = tri.eigenvalues()[0];
    ritz.setZero();
    for (Eigen::Index i = 0; i < k; ++i) ritz += tri.eigenvectors()(i, 0) * basis[i];
    clean(ritz);
    ritz.normalize();
    apply(terms, ritz, hv);
    clean(hv);
    theta = ritz.dot(hv).real();
    if ((hv - theta * ritz).norm() < tol * std::max(1.0, std::abs(theta))) break;
    v = ritz;
  }
  return {theta, ritz};
}

LowestTwo lanczos_lowest(const WeightedPauliSum& h, Sector sector) {
  const auto terms = compile(h);
  const bool par = sector == Sector::parity_plus;
  LowestTwo out;
  out.ground = lanczos(terms, h.n_qubits(), par, {}, 7);
  const std::uint64_t red = (std::uint64_t{1} << h.n_qubits()) / (par ? 2 : 1);
  if (red > 1) out.next = lanczos(terms, h.n_qubits(), par, {out.ground.vector}, 11).value;
  return out;
}

LowestTwo lowest(const WeightedPauliSum& h, Sector sector, bool dense) {
  return dense ? dense_lowest(h, sector) : lanczos_lowest(h, sector);
}

StateVector to_state(int n, const Vec& v) {
  std::vector<cplx> amps(v.data(), v.data() + v.size());
  // Fix the global phase: largest amplitude real positive.
  std::size_t best = 0;
  for (std::size_t i = 1; i < amps.size(); ++i) {
    if (std::abs(amps[i]) > std::abs(amps[best]) + 1e-12) best = i;
  }
  const cplx phase = std::abs(amps[best]) > 0 ? std::conj(amps[best]) / std::abs(amps[best])
                                              : cplx{1.0, 0.0};
  for (auto& a : amps) a *= phase;
  StateVector s(n, std::move(amps));
  s.normalize();
  return s;
}

}  // namespace

double eigen_residual(const WeightedPauliSum& h, const StateVector& psi, double energy) {
  const auto hpsi = apply_pauli_sum(h, psi);
  double acc = 0.0;
  for (std::size_t i = 0; i < psi.dim(); ++i) acc += std::norm(hpsi[i] - energy * psi[i]);
  return std::sqrt(acc);
}

GroundStateResult exact_ground_state(const WeightedPauliSum& h, Sector sector,
                                     SolverMode mode) {
  const int n = h.n_qubits();
  if (n > max_state_qubits) throw std::invalid_argument("too many qubits for exact diagonalisation");
  bool dense;
  switch (mode) {
    case SolverMode::dense:
      if (n > dense_max_qubits) {
        throw std::invalid_argument("dense mode supports at most " +
                                    std::to_string(dense_max_qubits) + " qubits");
      }
      dense = true;
      break;
    case SolverMode::lanczos: dense = false; break;
    default: dense = n <= dense_auto_max_qubits;
  }
  if (sector == Sector::parity_plus) check_parity_symmetric(h);

  auto low = lowest(h, sector, dense);
  GroundStateResult r;
  r.sector = sector;
  if (sector == Sector::full && low.next && *low.next - low.ground.value < degeneracy_threshold) {
    r.degenerate = true;
    check_parity_symmetric(h);
    low = lowest(h, Sector::parity_plus, dense);
    r.sector = Sector::parity_plus;
  }
  r.energy = low.ground.value;
  if (low.next) r.gap = *low.next - low.ground.value;
  if (sector == Sector::parity_plus && r.gap && *r.gap < degeneracy_threshold) r.degenerate = true;
  r.state = to_state(n, low.ground.vector);
  r.residual = eigen_residual(h, r.state, r.energy);
  return r;
}

StateVector ghz_state(int n) {
  if (n < 1) throw std::invalid_argument("ghz_state needs n >= 1");
  StateVector s(n);
  s[0] = M_SQRT1_2;
  s[s.dim() - 1] = M_SQRT1_2;
  return s;
}

double improvement_ratio(double f_conventional, double f_prh) {
  if (!(f_conventional >= 0.0 && f_conventional <= 1.0 && f_prh >= 0.0 && f_prh <= 1.0)) {
    throw std::invalid_argument("fidelities must lie in [0, 1]");
  }
  if (f_conventional == 1.0) {
    throw std::domain_error("improvement ratio undefined: conventional fidelity is 1");
  }
  return (f_prh - f_conventional) / (1.0 - f_conventional);
}

}  // namespace qlab
