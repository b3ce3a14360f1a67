#pragma once

#include <string>
#include <vector>

#include "phi4/core.hpp"
#include "phi4/pauli.hpp"
#include "phi4/resources.hpp"

namespace phi4 {

// H = sum_x [pi2 Pi^2 + phi2 Phi^2 + phi4 Phi^4] - phiphi sum_{x,i} Phi(x) Phi(x+i)
struct FamilyWeights {
  double pi2 = 0.5, phi2 = 0.0, phi4 = 0.0, phiphi = 1.0;
  // 1/2, (M^2+d+1)/2, Lambda/4!, 1 : the lattice Hamiltonian itself
  static FamilyWeights standard(const LatticeParams& p);
  // 1/2, M^2+d+1, Lambda/4!, 2 : the shared coefficients loaded by PREP_F
  static FamilyWeights prep(const LatticeParams& p);
};

// Single-site operators on the 2k-point grid, row b holds field value (b-k+1)*delta.
struct SiteBlocks {
  DenseOperator F;  // unitary DFT, F_jl = exp(-2 pi i v_j v_l / 2k)/sqrt(2k) on field values
  DenseOperator phi, pi, phi2, pi2, phi4;
};

SiteBlocks site_blocks(const AmplitudeCutoffs& c);

struct AmpHamiltonian {
  DenseOperator dense;
  SiteBlocks blocks;
  AmplitudeCutoffs cutoffs;
  LatticeParams params;
  FamilyWeights weights;
  double coeff_1norm = 0.0;  // l1 norm of the equal-weight LCU of this Hamiltonian
  int n_qubits() const { return static_cast<int>(params.Omega) * cutoffs.qubits_per_site; }
};

// Dense operator acting as `op` on site x of an Omega-site register of local dimension dl.
DenseOperator embed_site(const DenseOperator& op, long x, long Omega, long dl);

AmpHamiltonian build_amp_hamiltonian(const LatticeParams& params, const AmplitudeCutoffs& cutoffs);
AmpHamiltonian build_amp_hamiltonian(const LatticeParams& params, const AmplitudeCutoffs& cutoffs,
                                     const FamilyWeights& w);

double equal_weight_l1(const LatticeParams& params, const AmplitudeCutoffs& cutoffs, const FamilyWeights& w);

// Kinetic part and field part, H = H_pi + H_phi.
std::pair<DenseOperator, DenseOperator> amp_split(const AmpHamiltonian& h);

double phi_max_for_energy(double E_max, double tail_prob, const LatticeParams& params);

struct SectorProjector {
  int k = 2;
  long Omega = 1;
  int parity = +1;
  // per-site permutation b -> 2k-2-b, fixing 2k-1
  static int map_site(int b, int k) { return b == 2 * k - 1 ? b : 2 * k - 2 - b; }
  long apply(long state) const;
  DenseOperator dense() const;                 // global permutation U
  std::vector<long> symmetric_basis() const;   // states avoiding the unpaired grid point
};

struct SectorSpectra {
  std::vector<double> even, odd;
  std::vector<double> symmetric;  // spectrum of H compressed onto the symmetric subspace
};

SectorSpectra sector_split(const AmpHamiltonian& h);

ResourceCount controlled_negation_cost(const AmplitudeCutoffs& cutoffs, long Omega, bool reuse_ancilla = true);

// Column-major complex128 payload behind a 16-byte header (8-byte magic, 8-byte dimension).
void export_dense(const std::string& path, const DenseOperator& m);
DenseOperator import_dense(const std::string& path);

}  // namespace phi4
