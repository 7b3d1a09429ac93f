#include "qlab/pauli.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace qlab {

namespace {

void check_width(int n) {
  if (n < 1 || n > 62) {
    throw std::invalid_argument("pauli string width must be in [1, 62], got " +
                                std::to_string(n));
  }
}

// Two Pauli strings commute iff they anticommute at an even number of sites.
bool symplectic_commute(std::uint64_t x1, std::uint64_t z1, std::uint64_t x2,
                        std::uint64_t z2) {
  return ((std::popcount(x1 & z2) + std::popcount(z1 & x2)) & 1) == 0;
}

}  // namespace

PauliString::PauliString(std::string_view letters, double coefficient)
    : n_(static_cast<int>(letters.size())), coeff_(coefficient) {
  check_width(n_);
  if (!std::isfinite(coefficient)) {
    throw std::invalid_argument("pauli coefficient must be finite");
  }
  for (int q = 0; q < n_; ++q) {
    const auto m = qubit_mask(q, n_);
    switch (letters[q]) {
      case 'I': break;
      case 'X': x_ |= m; break;
      case 'Y': x_ |= m; z_ |= m; break;
      case 'Z': z_ |= m; break;
      default:
        throw std::invalid_argument(std::string("unknown pauli letter '") +
                                    letters[q] + "'");
    }
  }
}

PauliString PauliString::identity(int n_qubits, double coefficient) {
  return PauliString(std::string(n_qubits, 'I'), coefficient);
}

PauliString PauliString::single(int n_qubits, int q, char letter,
                                double coefficient) {
  if (q < 0 || q >= n_qubits) throw std::out_of_range("qubit index out of range");
  std::string s(n_qubits, 'I');
  s[q] = letter;
  return PauliString(s, coefficient);
}

PauliString PauliString::pair(int n_qubits, int a, char la, int b, char lb,
                              double coefficient) {
  if (a < 0 || a >= n_qubits || b < 0 || b >= n_qubits || a == b) {
    throw std::out_of_range("pair indices out of range or equal");
  }
  std::string s(n_qubits, 'I');
  s[a] = la;
  s[b] = lb;
  return PauliString(s, coefficient);
}

int PauliString::y_count() const { return std::popcount(x_ & z_); }

char PauliString::letter(int q) const {
  const auto m = qubit_mask(q, n_);
  const bool x = x_ & m, z = z_ & m;
  if (x && z) return 'Y';
  if (x) return 'X';
  if (z) return 'Z';
  return 'I';
}

std::string PauliString::letters() const {
  std::string s(n_, 'I');
  for (int q = 0; q < n_; ++q) s[q] = letter(q);
  return s;
}

std::vector<int> PauliString::support() const {
  std::vector<int> out;
  for (int q = 0; q < n_; ++q) {
    if ((x_ | z_) & qubit_mask(q, n_)) out.push_back(q);
  }
  return out;
}

bool PauliString::commutes_with(const PauliString& other) const {
  return symplectic_commute(x_, z_, other.x_, other.z_);
}

PauliString PauliString::with_coefficient(double c) const {
  PauliString p = *this;
  p.coeff_ = c;
  return p;
}

PauliString PauliString::permuted(const std::vector<int>& perm) const {
  if (static_cast<int>(perm.size()) != n_) {
    throw std::invalid_argument("permutation size mismatch");
  }
  std::string s(n_, 'I');
  for (int q = 0; q < n_; ++q) s.at(perm[q]) = letter(q);
  return PauliString(s, coeff_);
}

WeightedPauliSum::WeightedPauliSum(int n_qubits) : n_(n_qubits) {
  check_width(n_qubits);
}

WeightedPauliSum::WeightedPauliSum(int n_qubits,
                                   const std::vector<PauliString>& terms)
    : WeightedPauliSum(n_qubits) {
  for (const auto& t : terms) add(t);
}

void WeightedPauliSum::add(const PauliString& term) {
  if (term.n_qubits() != n_) {
    throw std::invalid_argument("term width " + std::to_string(term.n_qubits()) +
                                " does not match sum width " + std::to_string(n_));
  }
  for (auto& t : terms_) {
    if (t.same_pattern(term)) {
      t = t.with_coefficient(t.coefficient() + term.coefficient());
      return;
    }
  }
  terms_.push_back(term);
}

WeightedPauliSum& WeightedPauliSum::operator+=(const WeightedPauliSum& other) {
  for (const auto& t : other.terms_) add(t);
  return *this;
}

double WeightedPauliSum::coefficient_of(const PauliString& pattern) const {
  for (const auto& t : terms_) {
    if (t.same_pattern(pattern)) return t.coefficient();
  }
  return 0.0;
}

bool WeightedPauliSum::equals(const WeightedPauliSum& other, double tol) const {
  if (n_ != other.n_) return false;
  for (const auto& t : terms_) {
    if (std::abs(t.coefficient() - other.coefficient_of(t)) > tol) return false;
  }
  for (const auto& t : other.terms_) {
    if (std::abs(t.coefficient() - coefficient_of(t)) > tol) return false;
  }
  return true;
}

bool WeightedPauliSum::all_terms_commute() const {
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    for (std::size_t j = i + 1; j < terms_.size(); ++j) {
      if (!terms_[i].commutes_with(terms_[j])) return false;
    }
  }
  return true;
}

bool WeightedPauliSum::commutes_with(const WeightedPauliSum& other) const {
  // Sufficient test only: termwise commutation. Used to detect the
  // non-commuting neighbour parts of a split.
  for (const auto& a : terms_) {
    for (const auto& b : other.terms_) {
      if (!a.commutes_with(b)) return false;
    }
  }
  return true;
}

WeightedPauliSum WeightedPauliSum::permuted(const std::vector<int>& perm) const {
  WeightedPauliSum out(n_);
  for (const auto& t : terms_) out.add(t.permuted(perm));
  return out;
}

}  // namespace qlab
