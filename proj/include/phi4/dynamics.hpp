#pragma once

#include <string>
#include <vector>

#include "phi4/amp_model.hpp"
#include "phi4/occ_model.hpp"
#include "phi4/pauli.hpp"

namespace phi4 {

// e^{-i H t} through the Hermitian eigendecomposition.
DenseOperator expm_hermitian(const DenseOperator& H, double t);

struct TrotterStep {
  std::vector<DenseOperator> half_steps;  // e^{-i H_g tau/2}
  double tau = 0.0;
  DenseOperator matrix;                   // S_2(tau)
};

TrotterStep make_trotter_step(const std::vector<DenseOperator>& fragments, double tau);
// Symmetric product prod_g e^{-i H_g tau/2} followed by the same factors in reverse.
DenseOperator trotter_s2(const std::vector<DenseOperator>& fragments, double tau);
double trotter_error(const std::vector<DenseOperator>& fragments, double tau);

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  bool skipped = false;  // every error sat at the round-off floor
  std::string status;
  std::vector<double> taus, errors;
};

ScalingFit trotter_error_scaling(const std::vector<DenseOperator>& fragments, const std::vector<double>& taus);

// Fragments as dense matrices on the one-hot subspace, H0 already folded into H45.
std::vector<DenseOperator> occupation_fragments(const OccHamiltonian& h);
// {H_pi, H_phi}
std::vector<DenseOperator> amplitude_fragments(const AmpHamiltonian& h);

// Nested-commutator bound for the kinetic/field split of the amplitude Hamiltonian.
double alpha_comm_amp(const LatticeParams& params, const AmplitudeCutoffs& cutoffs);

struct SpectrumResult {
  std::vector<double> eigenvalues;  // sorted
  std::vector<std::string> sectors; // "even" or "odd" per eigenvalue
  double ground_energy = 0.0;
  double even_gap = 0.0;  // first excitation within the even sector
  double odd_gap = 0.0;   // lowest odd level above the ground state
};

SpectrumResult sector_spectrum(const AmpHamiltonian& h);
std::string spectrum_csv(const SpectrumResult& s);

}  // namespace phi4
