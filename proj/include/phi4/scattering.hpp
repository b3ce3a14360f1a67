#pragma once

#include <string>
#include <vector>

#include "phi4/amp_model.hpp"
#include "phi4/dynamics.hpp"

namespace phi4 {

struct PhaseExtraction {
  double L = 0.0;
  double m = 0.0;
  double E = 0.0;
  long n = 0;
  double p = 0.0;
  double delta = 0.0;  // in (-pi, pi]
  double delta_uncertainty = 0.0;
};

struct Rapidity {
  double theta = 0.0;
  double kink_mass = 0.0;
  double momentum() const;  // kink_mass sinh(theta), the + branch
};

// Relative momentum of two particles of mass m sharing energy E in their rest frame.
double relative_momentum(double E, double m);
double two_particle_energy(double p, double m);

// Quantization index nearest to the free solution, round(pL / 2 pi).
long nearest_quantum_number(double E, double L, double m);

PhaseExtraction invert_energy_to_phase(double E, double L, double m, long n, double dE = 0.0);
// Same with n picked by nearest_quantum_number.
PhaseExtraction invert_energy_to_phase(double E, double L, double m);

double phase_uncertainty(double L, double E, double p, double dE);

Rapidity rapidity(double E, double kink_mass);

/// Two-particle level from an exactly diagonalised amplitude Hamiltonian.
struct SectorPhase {
  SpectrumResult spectrum;
  double mass = 0.0;          // lowest odd excitation
  double pair_energy = 0.0;   // first even excitation above 2 * mass
  PhaseExtraction phase;
  Rapidity rap;
};

// Box length is P lattice spacings; dE is the energy resolution fed to the uncertainty.
SectorPhase sector_phase(const AmpHamiltonian& h, double dE);

struct ScatterRow {
  double L = 0.0, E = 0.0, dE = 0.0;
};

std::vector<ScatterRow> parse_scatter_csv(const std::string& text);
// Columns L,E,dE,n,p,delta,ddelta,theta. The kink mass defaults to m.
std::string scatter_csv(const std::vector<ScatterRow>& rows, double m, double kink_mass = 0.0);

}  // namespace phi4
