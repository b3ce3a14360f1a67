#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "phi4/core.hpp"

namespace phi4 {

enum class LcuFamily { equal_weight, z_binary, signature };
const char* family_name(LcuFamily f);

/// A +-1 diagonal unitary on the 2k-point field register of one site.
struct UnitaryDescriptor {
  enum class Kind { identity, signature_threshold, pauli_z_product, signature_bits };
  Kind kind = Kind::identity;
  int k = 2;
  int power = 1;               // field power for threshold/bits kinds
  std::int64_t threshold = 0;  // i in 2*Theta(n_max + n_j - i - 1) - 1
  std::uint32_t z_mask = 0;    // qubits carrying Z
  int bit = 0;                 // 1-based bit plane

  std::vector<int> diagonal() const;
  std::string payload() const;
};

struct LcuTerm {
  std::int64_t num = 0;  // coefficient = num / denom
  UnitaryDescriptor unitary;
};

struct LcuDecomposition {
  LcuFamily family = LcuFamily::equal_weight;
  int k = 2;
  int power = 1;
  std::int64_t denom = 1;
  std::vector<LcuTerm> terms;
  double l1 = 0.0;
  long target_dim = 4;

  double coeff(std::size_t i) const { return static_cast<double>(terms[i].num) / static_cast<double>(denom); }
  std::size_t non_identity_count() const;
  // sum_i num_i * U_i, which equals denom * target exactly
  std::vector<std::int64_t> reconstruct_scaled() const;
  std::string to_json() const;
};

// (Phi/delta)^power on rows b = 0..2k-1, value (b-k+1)^power.
std::vector<std::int64_t> diagonal_target(int k, int power);

LcuDecomposition lcu_equal_weight(int k, int power);
inline LcuDecomposition lcu_equal_weight_phi(int k) { return lcu_equal_weight(k, 1); }
inline LcuDecomposition lcu_equal_weight_phi2(int k) { return lcu_equal_weight(k, 2); }
inline LcuDecomposition lcu_equal_weight_phi4(int k) { return lcu_equal_weight(k, 4); }
LcuDecomposition lcu_z_binary(int k, int power);
LcuDecomposition lcu_signature(int k, int power);

// Z-string coefficients of a diagonal by the Walsh-Hadamard transform, scaled by 2k.
std::map<std::uint32_t, std::int64_t> walsh_coefficients(const std::vector<std::int64_t>& diag);

// Integers n in [1, n_max+1] whose power has bit `bit` (1-based) set. The upper end n_max+1 = k is
// the unpaired top value of the field grid, so the census covers every magnitude on that grid.
std::vector<std::int64_t> bit_pattern_census(int power, std::int64_t n_max, int bit);
int census_bits(int power, std::int64_t n_max);

// Checks used by the census report.
bool bin_intg_holds(std::uint64_t n, int bit);
bool bin_pattern_iff(int power, std::uint64_t n, int bit);
bool reflection_symmetric(int power, int bit);
bool in_residue_set(int power, std::uint64_t residue, int bit);

enum class L1Variant { z_binary_decomposition, signature_decomposition, equal_weight };
double l1_norm_hamp(const LatticeParams& params, const AmplitudeCutoffs& cutoffs, L1Variant v);

}  // namespace phi4
