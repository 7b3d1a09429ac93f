#include "qlab/open_system.hpp"

#include <Eigen/Dense>

#include <bit>
#include <cmath>
#include <stdexcept>

#include "qlab/ansatz.hpp"
#include "qlab/oracle.hpp"

namespace qlab {

DensityMatrix::DensityMatrix(int n_qubits)
    : n_(n_qubits), dim_(std::size_t{1} << n_qubits), data_(dim_ * dim_, cplx{0.0, 0.0}) {
  if (n_qubits < 1 || n_qubits > 12) {
    throw std::invalid_argument("density matrices support 1..12 qubits");
  }
  data_[0] = 1.0;
}

DensityMatrix DensityMatrix::from_pure(const StateVector& psi) {
  DensityMatrix rho(psi.n_qubits());
  for (std::size_t a = 0; a < rho.dim_; ++a) {
    for (std::size_t b = 0; b < rho.dim_; ++b) rho(a, b) = psi[a] * std::conj(psi[b]);
  }
  return rho;
}

cplx DensityMatrix::trace() const {
  cplx t{0.0, 0.0};
  for (std::size_t a = 0; a < dim_; ++a) t += (*this)(a, a);
  return t;
}

double DensityMatrix::hermiticity_error() const {
  double e = 0.0;
  for (std::size_t a = 0; a < dim_; ++a) {
    for (std::size_t b = a; b < dim_; ++b) {
      e = std::max(e, std::abs((*this)(a, b) - std::conj((*this)(b, a))));
    }
  }
  return e;
}

double DensityMatrix::min_eigenvalue() const {
  const auto d = static_cast<Eigen::Index>(dim_);
  Eigen::MatrixXcd m(d, d);
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = 0; b < d; ++b) m(a, b) = (*this)(a, b);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

double DensityMatrix::fidelity(const StateVector& psi) const {
  if (psi.dim() != dim_) throw std::invalid_argument("state/density width mismatch");
  cplx acc{0.0, 0.0};
  for (std::size_t a = 0; a < dim_; ++a) {
    if (psi[a] == cplx{0.0, 0.0}) continue;
    cplx row{0.0, 0.0};
    for (std::size_t b = 0; b < dim_; ++b) row += (*this)(a, b) * psi[b];
    acc += std::conj(psi[a]) * row;
  }
  return acc.real();
}

void DensityMatrix::transpose_in_place() {
  for (std::size_t a = 0; a < dim_; ++a) {
    for (std::size_t b = a + 1; b < dim_; ++b) std::swap((*this)(a, b), (*this)(b, a));
  }
}

void apply_layer(DensityMatrix& rho, const LayerGenerator& gen, double angle) {
  const int n = rho.n_qubits();
  validate_layer(gen, n);
  // Generators here are real, so conj(U) = exp(+i angle G).
  for (std::size_t a = 0; a < rho.dim(); ++a) kernels::layer(rho.row(a), n, gen, -angle);
  rho.transpose_in_place();
  for (std::size_t a = 0; a < rho.dim(); ++a) kernels::layer(rho.row(a), n, gen, angle);
  rho.transpose_in_place();
}

namespace {

struct Term {
  std::uint64_t x;
  std::uint64_t z;
  cplx c;
};

class Liouvillian {
public:
  Liouvillian(const WeightedPauliSum& h, const DampingSpec& d, int n)
      : n_(n), dim_(std::size_t{1} << n), g2_(d.gamma * d.gamma) {
    static const cplx iy[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    diagonal_h_ = true;
    energy_.assign(dim_, 0.0);
    for (const auto& t : h.terms()) {
      if (t.x_mask() != 0) {
        diagonal_h_ = false;
        terms_.push_back({t.x_mask(), t.z_mask(), t.coefficient() * iy[t.y_count() % 4]});
      } else {
        for (std::uint64_t b = 0; b < dim_; ++b) {
          energy_[b] += (std::popcount(b & t.z_mask()) & 1) ? -t.coefficient() : t.coefficient();
        }
      }
    }
    if (d.sites.empty()) {
      damp_mask_ = dim_ - 1;
    } else {
      for (int s : d.sites) {
        if (s < 0 || s >= n) throw std::invalid_argument("damping site out of range");
        damp_mask_ |= qubit_mask(s, n);
      }
    }
    excited_.resize(dim_);
    for (std::uint64_t b = 0; b < dim_; ++b) excited_[b] = std::popcount(b & damp_mask_);
  }

  /// With a diagonal H the flow maps the upper triangle (b >= a) onto
  /// itself, so only that half needs integrating.
  bool upper_only() const { return diagonal_h_; }

  // out = L(rho); only b >= a when upper_only().
  void operator()(std::span<const cplx> rho, std::span<cplx> out) const {
    const double half = 0.5 * g2_;
    for (std::uint64_t a = 0; a < dim_; ++a) {
      const cplx* ra = rho.data() + a * dim_;
      cplx* oa = out.data() + a * dim_;
      for (std::uint64_t b = diagonal_h_ ? a : 0; b < dim_; ++b) {
        const cplx rate{-half * (excited_[a] + excited_[b]), -(energy_[a] - energy_[b])};
        cplx v = rate * ra[b];
        if (g2_ != 0.0) {
          // sigma^-_j rho sigma^+_j feeds (a, b) from (a|m, b|m) when both bits are 0.
          std::uint64_t free = ~(a | b) & damp_mask_;
          while (free) {
            const std::uint64_t m = free & (~free + 1);
            free ^= m;
            v += g2_ * rho[(a | m) * dim_ + (b | m)];
          }
        }
        oa[b] = v;
      }
    }
    if (diagonal_h_) return;
    // -i (H_od rho - rho H_od) for the off-diagonal Pauli terms.
    const cplx mi{0.0, -1.0};
    for (const auto& t : terms_) {
      for (std::uint64_t a = 0; a < dim_; ++a) {
        // (P rho)_{a^x, b} = phase(a) rho_{a b}
        const cplx pa = ((std::popcount(a & t.z) & 1) ? -t.c : t.c);
        const cplx* ra = rho.data() + a * dim_;
        cplx* o1 = out.data() + (a ^ t.x) * dim_;
        cplx* o2 = out.data() + a * dim_;
        for (std::uint64_t b = 0; b < dim_; ++b) {
          o1[b] += mi * pa * ra[b];
          // (rho P)_{a, b} = rho_{a, b^x} phase(b)
          const cplx pb = ((std::popcount(b & t.z) & 1) ? -t.c : t.c);
          o2[b] -= mi * ra[b ^ t.x] * pb;
        }
      }
    }
  }

private:
  int n_;
  std::uint64_t dim_;
  double g2_;
  bool diagonal_h_ = true;
  std::vector<double> energy_;
  std::vector<Term> terms_;
  std::uint64_t damp_mask_ = 0;
  std::vector<int> excited_;
};

}  // namespace

DensityMatrix lindblad_evolve(const DensityMatrix& rho, const WeightedPauliSum& h,
                              const DampingSpec& damping, double t, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(t >= 0.0)) throw std::invalid_argument("evolution time must be non-negative");
  if (!std::isfinite(damping.gamma) || damping.gamma < 0.0) {
    throw std::invalid_argument("damping strength must be finite and non-negative");
  }
  if (h.n_qubits() != rho.n_qubits()) throw std::invalid_argument("H/rho width mismatch");
  DensityMatrix out = rho;
  if (t == 0.0) return out;

  const Liouvillian lv(h, damping, rho.n_qubits());
  const auto steps = static_cast<long>(std::ceil(t / dt - 1e-12));
  const double step = t / static_cast<double>(steps);
  const std::size_t dim = out.dim();
  const std::size_t len = dim * dim;
  std::vector<cplx> k(len), acc(len), tmp(len);
  const cplx tr0 = rho.trace();
  const bool upper = lv.upper_only();

  auto y = out.data();
  // Elementwise update over the integrated part of the matrix.
  auto sweep = [&](auto&& op) {
    for (std::size_t a = 0; a < dim; ++a) {
      for (std::size_t i = a * dim + (upper ? a : 0); i < (a + 1) * dim; ++i) op(i);
    }
  };
  for (long s = 0; s < steps; ++s) {
    lv(y, k);  // k1
    sweep([&](std::size_t i) {
      acc[i] = k[i];
      tmp[i] = y[i] + 0.5 * step * k[i];
    });
    lv(tmp, k);  // k2
    sweep([&](std::size_t i) {
      acc[i] += 2.0 * k[i];
      tmp[i] = y[i] + 0.5 * step * k[i];
    });
    lv(tmp, k);  // k3
    sweep([&](std::size_t i) {
      acc[i] += 2.0 * k[i];
      tmp[i] = y[i] + step * k[i];
    });
    lv(tmp, k);  // k4
    sweep([&](std::size_t i) { y[i] += (step / 6.0) * (acc[i] + k[i]); });
  }
  if (upper) {
    for (std::size_t a = 0; a < dim; ++a) {
      out(a, a) = out(a, a).real();
      for (std::size_t b = a + 1; b < dim; ++b) out(b, a) = std::conj(out(a, b));
    }
  }
  if (std::abs(out.trace() - tr0) > 1e-6) {
    throw std::runtime_error("trace drifted during Lindblad evolution; reduce dt");
  }
  return out;
}

DampedGhzResult damped_ghz_run(double gamma, int m, double dt) {
  const auto c = cross_ghz_circuit(m);
  const auto p = fixed_ghz_cross_params(m);
  const int n = c.n_qubits;
  auto rho = DensityMatrix::from_pure(prepare_initial(c.initial_state, n));
  const DampingSpec damping{gamma, {}};
  const std::size_t layers = c.layers.size();
  for (int cyc = 0; cyc < c.depth; ++cyc) {
    for (std::size_t jj = layers; jj-- > 0;) {
      const double angle = p.x[static_cast<std::size_t>(cyc) * layers + jj];
      const auto gen = c.bind(jj, p.y);
      if (gen.kind == LayerKind::x_field) {
        apply_layer(rho, gen, angle);
      } else {
        // Evolve for |angle| under +-G so elapsed time is non-negative.
        auto h = generator_operator(gen, n);
        if (angle < 0.0) {
          WeightedPauliSum neg(n);
          for (const auto& t : h.terms()) neg.add(t.with_coefficient(-t.coefficient()));
          h = neg;
        }
        rho = lindblad_evolve(rho, h, damping, std::abs(angle), dt);
      }
    }
  }
  DampedGhzResult r;
  r.infidelity = 1.0 - rho.fidelity(ghz_state(n));
  r.trace_error = std::abs(rho.trace() - 1.0);
  r.hermiticity_error = rho.hermiticity_error();
  r.min_eigenvalue = rho.min_eigenvalue();
  return r;
}

PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("power-law fit: length mismatch");
  if (x.size() < 3) throw std::invalid_argument("power-law fit needs at least 3 points");
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0)) {
      throw std::invalid_argument("power-law fit needs positive values");
    }
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
    sx += lx.back();
    sy += ly.back();
    sxx += lx.back() * lx.back();
    sxy += lx.back() * ly.back();
  }
  const double den = n * sxx - sx * sx;
  if (!(std::abs(den) > 0.0)) throw std::invalid_argument("power-law fit: degenerate x values");
  PowerLawFit f;
  f.exponent = (n * sxy - sx * sy) / den;
  const double intercept = (sy - f.exponent * sx) / n;
  f.prefactor = std::exp(intercept);
  const double mean = sy / n;
  double ss_tot = 0, ss_res = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - (intercept + f.exponent * lx[i]);
    ss_res += r * r;
    ss_tot += (ly[i] - mean) * (ly[i] - mean);
  }
  f.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return f;
}

}  // namespace qlab
