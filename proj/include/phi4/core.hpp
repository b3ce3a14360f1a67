#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace phi4 {

/// Physical and lattice parameters. Scaled quantities are in lattice units.
struct LatticeParams {
  double m = 1.0;       // bare mass
  double M = 1.0;       // a*m
  double lambda = 0.0;  // bare coupling
  double Lambda = 0.0;  // a^(4-d)*lambda
  double a = 1.0;
  int d = 1;
  int P = 1;            // sites per dimension
  long Omega = 1;       // P^d
  long E_D = 1;         // d*Omega nearest-neighbour edges (periodic)
};

using RawParams = std::map<std::string, double>;

// Required keys: m, lambda, a, d, P. With amplitude_basis the site count must be a power of two.
LatticeParams build_params(const RawParams& raw, bool amplitude_basis = false);

struct OccupationCutoffs {
  int N = 1;
  long mode_count = 1;
  int width() const { return N + 1; }
  long register_qubits() const { return static_cast<long>(N + 1) * mode_count; }
};

OccupationCutoffs make_occ_cutoffs(int N, const LatticeParams& p);

struct AmplitudeCutoffs {
  int k = 2;
  double delta_phi = 0.0;
  double phi_max = 0.0;
  int qubits_per_site = 2;
  int dim() const { return 2 * k; }
  // field value (in bins) stored at row b
  int value(int b) const { return b - k + 1; }
};

// Without an explicit delta the harmonic normalisation sqrt(pi/k) is used.
AmplitudeCutoffs make_amp_cutoffs(int k, std::optional<double> delta_phi = std::nullopt);

bool is_power_of_two(long x);
int ilog2(long x);  // exact for powers of two

double omega(double M, double p_abs);

struct Dispersion {
  // integer momentum labels n per mode, p_i = 2*pi*n_i/P
  std::vector<std::vector<int>> labels;
  std::vector<double> p_sq;
  std::vector<double> omega;
  double omega_min = 0.0;
  double omega_max = 0.0;
};

Dispersion dispersion_table(const LatticeParams& p);

// Modes are indexed lexicographically by grid coordinates c_i in [0,P), dimension 0 fastest.
std::vector<int> mode_coords(long mode, int P, int d);
long mode_from_coords(const std::vector<int>& c, int P);
// (p + q) with per-dimension wraparound; sign = -1 subtracts.
long mode_add(long p, long q, int P, int d, int sign = 1);

// Periodic neighbour x + e_i.
long site_neighbor(long x, int dim, int P, int d);

}  // namespace phi4
