#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace phi4 {

using cplx = std::complex<double>;
using DenseOperator = Eigen::MatrixXcd;

inline constexpr int kOracleMaxQubits = 14;

enum class Pauli : std::uint8_t { X = 1, Y = 2, Z = 3 };

// Sorted by qubit index, no repeats. Empty string is the identity.
using PauliString = std::vector<std::pair<int, Pauli>>;

struct PauliTerm {
  double coeff = 0.0;
  PauliString factors;
};

class PauliSum {
 public:
  explicit PauliSum(int n_qubits = 0) : n_qubits_(n_qubits) {}

  int n_qubits() const { return n_qubits_; }
  void set_n_qubits(int n);
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  // Factors may arrive unsorted; duplicates on one qubit are rejected.
  void add(double coeff, PauliString factors);
  void add_identity(double coeff) { add(coeff, {}); }

  PauliSum& operator+=(const PauliSum& o);
  PauliSum& operator*=(double s);
  friend PauliSum operator+(PauliSum a, const PauliSum& b) { return a += b; }
  friend PauliSum operator*(double s, PauliSum a) { return a *= s; }

  // Product of two sums acting on disjoint qubit sets.
  PauliSum tensor(const PauliSum& o) const;

  // Drop coefficients below tol.
  void prune(double tol = 0.0);

  std::vector<PauliTerm> terms() const;
  const std::map<PauliString, double>& raw() const { return terms_; }

  double l1() const;
  double identity_coeff() const;
  std::string serialize() const;
  static PauliSum parse(const std::string& text, int n_qubits);

 private:
  int n_qubits_;
  std::map<PauliString, double> terms_;
};

// Action of one Pauli string on a computational basis state: P|s> = phase |s'>.
std::pair<std::uint64_t, cplx> apply_string(const PauliString& s, std::uint64_t state);

DenseOperator to_dense(const PauliSum& sum);
// Matrix restricted to the span of the given basis states (columns/rows in list order).
DenseOperator to_dense_subspace(const PauliSum& sum, const std::vector<std::uint64_t>& basis);

// One-hot registers of width w for each of `modes` registers, qubit p*w + n.
struct UnaryLayout {
  int modes = 1;
  int width = 2;
  int n_qubits() const { return modes * width; }
  std::vector<std::uint64_t> basis() const;  // index sum n_p w^p
};

enum class Subspace { full, unary };

double spectral_norm(const DenseOperator& m);
double spectral_norm(const PauliSum& sum, Subspace sub = Subspace::full,
                     std::optional<UnaryLayout> layout = std::nullopt);
double commutator_norm(const PauliSum& a, const PauliSum& b, Subspace sub = Subspace::full,
                       std::optional<UnaryLayout> layout = std::nullopt);

bool is_hermitian(const DenseOperator& m, double tol = 1e-12);

}  // namespace phi4
