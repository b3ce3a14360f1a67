#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "phi4/core.hpp"
#include "phi4/pauli.hpp"
#include "phi4/rational.hpp"

namespace phi4 {

// per_volume carries an extra 1/|Omega| on the quartic term; unit drops it.
enum class OccNormalization { per_volume, unit };

struct OccOptions {
  OccNormalization normalization = OccNormalization::per_volume;
};

struct OccHamiltonian {
  PauliSum h0, h1, h2, h3, h4, total;
  // Commuting sub-groups used for Trotter splitting; H0 is folded into H45.
  std::map<std::string, PauliSum> fragments;
  OccupationCutoffs cutoffs;
  LatticeParams params;
  UnaryLayout layout;
  double prefactor = 0.0;  // coupling/96, times 1/|Omega| for per_volume

  std::vector<PauliSum> group_split() const { return {h0, h1, h2, h3, h4}; }
  // Non-empty fragments in canonical order H11..H12, H21..H24, H31..H37, H41..H45.
  std::vector<std::pair<std::string, PauliSum>> fragment_split() const;
};

const std::vector<std::string>& occ_fragment_names();

// 1/2 sum_n sqrt((n+m)!/n!) g(n) (X_n X_{n+m} + Y_n Y_{n+m}) on mode p of a `modes`-mode register.
PauliSum ladder_weighted(long p, int m, const std::function<double(int)>& g, int N, long modes);
PauliSum map_ladder(long p, int m, int r, int N, long modes = 1);
PauliSum number_operator(long p, int N, long modes = 1);

OccHamiltonian build_occ_hamiltonian(const LatticeParams& params, const OccupationCutoffs& cutoffs,
                                     const OccOptions& opt = {});

// Independent oracle on the truncated Fock space, basis index sum_p n_p (N+1)^p.
struct OccDenseGroups {
  DenseOperator h0, h1, h2, h3, h4;
};
OccDenseGroups occ_dense_oracle(const LatticeParams& params, const OccupationCutoffs& cutoffs,
                                const OccOptions& opt = {});

struct GateCountOcc {
  Rational crz, rz, t, cnot, h;
  GateCountOcc& operator+=(const GateCountOcc& o) {
    crz += o.crz;
    rz += o.rz;
    t += o.t;
    cnot += o.cnot;
    h += o.h;
    return *this;
  }
};

struct OccGateReport {
  GateCountOcc h0, g1, g2, g3, g4, total;
  Rational rotations() const { return total.crz + total.rz; }
  Rational t_other() const { return total.t; }
};

OccGateReport gate_counts_occ(const OccupationCutoffs& cutoffs, const LatticeParams& params);

struct OccCommBounds {
  // [H11,H12], within H2, within H3, within H4', then 12,13,14,23,24,34
  double comm[10] = {};
  double comm_sum = 0.0;
  double norm_sum = 0.0;
  double alpha = 0.0;
};

OccCommBounds alpha_comm_occ_detail(const LatticeParams& params, const OccupationCutoffs& cutoffs, double beta = 1.0);
double alpha_comm_occ(const LatticeParams& params, const OccupationCutoffs& cutoffs, double beta = 1.0);

}  // namespace phi4
