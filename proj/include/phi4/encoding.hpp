#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "phi4/amp_model.hpp"
#include "phi4/core.hpp"
#include "phi4/pauli.hpp"

namespace phi4 {

enum class Algorithm { I_equal_weight, IIIa_z_lcu, IIIb_signature };
const char* algorithm_name(Algorithm a);

struct EncodingOptions {
  bool conjecture_iiib = false;
  double kappa = 4.0;            // T cost per signature-matrix bit under the conjectured shape
  bool phi4_short_form = false;   // use the short-form phi^4 count instead of the detailed one
  std::optional<FamilyWeights> weights;
};

// Amplitudes of PREP_F on |00>,|01>,|10>,|11> for the shared (pi2, phi2, phi4, phiphi) weights.
std::array<double, 4> build_prep_f(const LatticeParams& params);

/// One SELECT branch: a +-1 diagonal on the field register, optionally conjugated by a site DFT.
struct SelectTerm {
  double coeff = 0.0;  // strictly positive, signs live in diag
  Eigen::VectorXd diag;
  long fourier_site = -1;
  long site = -1;      // owning site; edges belong to their first endpoint
};

struct EncodingTally {
  double t_count = 0.0;
  double rz_count = 0.0;
  double aqft_count = 0.0;
  double cnot_count = 0.0;
  long ancilla_qubits = 0;
  double logical_qubits = 0.0;  // closed-form count including the field register
  std::vector<std::pair<std::string, double>> breakdown;
};

// Closed-form tallies only, valid for any cutoff including non powers of two.
EncodingTally encoding_tally(Algorithm alg, const LatticeParams& params, int k, const EncodingOptions& opt = {});

struct BlockEncoding {
  Algorithm algorithm = Algorithm::I_equal_weight;
  double alpha = 0.0;
  double alpha_bound = 0.0;  // closed-form l1 bound for the family
  long ancilla_qubits = 0;
  double t_count = 0.0;
  double rz_count = 0.0;
  double aqft_count = 0.0;
  EncodingTally tally;

  // Dense realisation. The encoded operator is H - identity_offset * I.
  bool dense = false;
  FamilyWeights weights;
  LatticeParams params;
  AmplitudeCutoffs cutoffs;
  double identity_offset = 0.0;
  std::vector<SelectTerm> terms;
  int index_qubits = 0;
  std::vector<DenseOperator> site_fourier;  // embedded DFT per site
  std::optional<DenseOperator> dense_prep, dense_select;

  long system_dim() const;
  long index_dim() const { return 1L << index_qubits; }
  Eigen::VectorXd prep_amplitudes() const;
  Eigen::VectorXcd apply_term(std::size_t i, const Eigen::VectorXcd& v) const;
  Eigen::VectorXcd apply_select(const Eigen::VectorXcd& v) const;
  Eigen::VectorXcd apply_prep(const Eigen::VectorXcd& v) const;
  DenseOperator term_unitary(std::size_t i) const;
  // sum_i coeff_i U_i on the system register
  DenseOperator encoded_operator() const;
  std::string to_json() const;
};

// Exact l1 norm of the implemented decomposition without building it.
double encoding_alpha(Algorithm alg, const LatticeParams& params, const AmplitudeCutoffs& cutoffs, const FamilyWeights& w);
double alpha_bound(Algorithm alg, const LatticeParams& params, const AmplitudeCutoffs& cutoffs, const FamilyWeights& w);

// Dense construction is capped at kOracleMaxQubits for system plus index registers.
BlockEncoding build_block_encoding(Algorithm alg, const LatticeParams& params, const AmplitudeCutoffs& cutoffs,
                                   bool dense, const EncodingOptions& opt = {});

// Hamiltonian that a block encoding targets, built with its weights.
AmpHamiltonian encoded_hamiltonian(const BlockEncoding& be);

double verify_block_identity(const BlockEncoding& be, const AmpHamiltonian& h);

struct WalkOperator {
  DenseOperator dense;  // empty above the materialisation cap
  double alpha = 0.0;
  BlockEncoding source;
  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const;
};

WalkOperator build_walk(const BlockEncoding& be, const AmpHamiltonian& h);

struct WalkPhaseCheck {
  double max_phase_mismatch = 0.0;
  double max_invariance_residual = 0.0;
  std::vector<double> expected;  // arccos(E_q / alpha)
  std::vector<double> measured;  // |theta| per invariant subspace
  bool full_spectrum_checked = false;
};

// Uses the two-dimensional invariant subspace spanned by PREP|0>|psi_q> and its SELECT image.
WalkPhaseCheck check_walk_phases(const WalkOperator& w, const AmpHamiltonian& h);

BlockEncoding divide_and_conquer_compose(const std::vector<BlockEncoding>& children, const std::vector<double>& weights);

// Per-site pieces whose weight-1 composition gives back `be`.
std::vector<BlockEncoding> site_children(const BlockEncoding& be);

}  // namespace phi4
