#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qlab {

/// Bit mask of qubit `q` in an `n`-qubit basis index. Qubit 0 is the most
/// significant bit, so kets read left to right as |q0 q1 ... q(n-1)>.
constexpr std::uint64_t qubit_mask(int q, int n) {
  return std::uint64_t{1} << (n - 1 - q);
}

/// Real-weighted tensor product of single-qubit Paulis.
///
/// Stored in symplectic form: `x_mask` has bits set where the letter is X or
/// Y, `z_mask` where it is Z or Y. Acting on a basis state,
/// P|b> = i^{#Y} (-1)^{|b & z|} |b ^ x>.
class PauliString {
public:
  PauliString() = default;
  PauliString(std::string_view letters, double coefficient);

  static PauliString identity(int n_qubits, double coefficient = 1.0);
  static PauliString single(int n_qubits, int q, char letter, double coefficient);
  static PauliString pair(int n_qubits, int a, char la, int b, char lb,
                          double coefficient);

  int n_qubits() const { return n_; }
  double coefficient() const { return coeff_; }
  std::uint64_t x_mask() const { return x_; }
  std::uint64_t z_mask() const { return z_; }
  int y_count() const;

  char letter(int q) const;
  std::string letters() const;

  /// Qubits carrying a non-identity letter, ascending.
  std::vector<int> support() const;

  bool same_pattern(const PauliString& other) const {
    return n_ == other.n_ && x_ == other.x_ && z_ == other.z_;
  }
  bool commutes_with(const PauliString& other) const;

  PauliString with_coefficient(double c) const;
  /// Relabels qubit q as perm[q].
  PauliString permuted(const std::vector<int>& perm) const;

private:
  int n_ = 0;
  std::uint64_t x_ = 0;
  std::uint64_t z_ = 0;
  double coeff_ = 0.0;
};

/// Hermitian operator sum_k c_k P_k with real c_k. Terms sharing a letter
/// pattern are merged on insertion; first-insertion order is kept.
class WeightedPauliSum {
public:
  explicit WeightedPauliSum(int n_qubits = 1);
  WeightedPauliSum(int n_qubits, const std::vector<PauliString>& terms);

  int n_qubits() const { return n_; }
  const std::vector<PauliString>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  void add(const PauliString& term);
  WeightedPauliSum& operator+=(const WeightedPauliSum& other);

  /// Coefficient of the given letter pattern, 0 when absent.
  double coefficient_of(const PauliString& pattern) const;

  /// True when both sums hold the same patterns with coefficients within tol.
  bool equals(const WeightedPauliSum& other, double tol = 0.0) const;

  bool all_terms_commute() const;
  bool commutes_with(const WeightedPauliSum& other) const;

  WeightedPauliSum permuted(const std::vector<int>& perm) const;

private:
  int n_;
  std::vector<PauliString> terms_;
};

}  // namespace qlab
