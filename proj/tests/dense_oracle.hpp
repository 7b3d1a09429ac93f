#pragma once
// Test-side reference: explicit Kronecker products and dense exponentials.
// Shares nothing with the library's bit-twiddling kernels.

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <vector>

#include "qlab/pauli.hpp"
#include "qlab/state.hpp"

namespace oracle {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline Mat pauli_2x2(char c) {
  Mat s(2, 2);
  switch (c) {
    case 'X': s << 0, 1, 1, 0; break;
    case 'Y': s << 0, cd(0, -1), cd(0, 1), 0; break;
    case 'Z': s << 1, 0, 0, -1; break;
    default: s << 1, 0, 0, 1;
  }
  return s;
}

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Leftmost letter is the most significant qubit.
inline Mat from_letters(const std::string& letters) {
  Mat m = Mat::Identity(1, 1);
  for (char c : letters) m = kron(m, pauli_2x2(c));
  return m;
}

inline Mat matrix(const qlab::WeightedPauliSum& h) {
  const auto dim = Eigen::Index{1} << h.n_qubits();
  Mat m = Mat::Zero(dim, dim);
  for (const auto& t : h.terms()) m += t.coefficient() * from_letters(t.letters());
  return m;
}

// exp(-i t H) for Hermitian H.
inline Mat expm(const Mat& h, double t) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  Vec ph(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < ph.size(); ++i) ph[i] = std::polar(1.0, -t * es.eigenvalues()[i]);
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

inline double ground_energy(const qlab::WeightedPauliSum& h) {
  Eigen::SelfAdjointEigenSolver<Mat> es(matrix(h));
  return es.eigenvalues()[0];
}

inline Vec vec(const qlab::StateVector& s) {
  Vec v(static_cast<Eigen::Index>(s.dim()));
  for (std::size_t i = 0; i < s.dim(); ++i) v[static_cast<Eigen::Index>(i)] = s[i];
  return v;
}

inline Vec plus_state(int n) {
  return Vec::Constant(Eigen::Index{1} << n, cd(std::pow(2.0, -0.5 * n), 0.0));
}

inline double fidelity(const Vec& a, const Vec& b) { return std::norm(a.dot(b)); }

}  // namespace oracle
