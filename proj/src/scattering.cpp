#include "phi4/scattering.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "phi4/errors.hpp"

namespace phi4 {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double reduce_branch(double x) {
  double r = std::remainder(x, kTwoPi);  // [-pi, pi]
  if (r <= -std::numbers::pi) r += kTwoPi;
  return r;
}

}  // namespace

double Rapidity::momentum() const { return kink_mass * std::sinh(theta); }

double relative_momentum(double E, double m) {
  if (!(E > 2.0 * m)) throw Error(ErrorCode::BelowThreshold, "energy at or below the two-particle threshold");
  return std::sqrt(E * E / 4.0 - m * m);
}

double two_particle_energy(double p, double m) { return 2.0 * std::sqrt(m * m + p * p); }

long nearest_quantum_number(double E, double L, double m) {
  return std::lround(relative_momentum(E, m) * L / kTwoPi);
}

PhaseExtraction invert_energy_to_phase(double E, double L, double m, long n, double dE) {
  if (!(L > 0)) throw Error(ErrorCode::InvalidParameter, "box length must be positive");
  PhaseExtraction r;
  r.L = L;
  r.m = m;
  r.E = E;
  r.n = n;
  r.p = relative_momentum(E, m);
  r.delta = reduce_branch(kTwoPi * n - r.p * L);
  r.delta_uncertainty = dE == 0.0 ? 0.0 : phase_uncertainty(L, E, r.p, dE);
  return r;
}

PhaseExtraction invert_energy_to_phase(double E, double L, double m) {
  return invert_energy_to_phase(E, L, m, nearest_quantum_number(E, L, m));
}

double phase_uncertainty(double L, double E, double p, double dE) {
  if (!(p > 0)) throw Error(ErrorCode::ZeroMomentum, "phase uncertainty diverges at zero momentum");
  return -L * E / (8.0 * p) * dE;
}

Rapidity rapidity(double E, double kink_mass) {
  if (!(kink_mass > 0)) throw Error(ErrorCode::InvalidParameter, "kink mass must be positive");
  if (E < 2.0 * kink_mass) throw Error(ErrorCode::BelowThreshold, "energy below two kink masses");
  return {std::acosh(E / (2.0 * kink_mass)), kink_mass};
}

SectorPhase sector_phase(const AmpHamiltonian& h, double dE) {
  SectorPhase s;
  s.spectrum = sector_spectrum(h);
  s.mass = s.spectrum.odd_gap;
  if (!(s.mass > 0)) throw Error(ErrorCode::InvalidParameter, "no odd excitation to set the mass");
  const double e0 = s.spectrum.ground_energy;
  for (std::size_t i = 0; i < s.spectrum.eigenvalues.size(); ++i) {
    const double gap = s.spectrum.eigenvalues[i] - e0;
    // strict margin so p stays away from the threshold singularity
    if (s.spectrum.sectors[i] == "even" && gap > 2.0 * s.mass * (1.0 + 1e-9)) {
      s.pair_energy = gap;
      break;
    }
  }
  if (s.pair_energy == 0.0) throw Error(ErrorCode::BelowThreshold, "no even level above the two-particle threshold");
  const double L = static_cast<double>(h.params.P);  // lattice units, like the energies
  s.phase = invert_energy_to_phase(s.pair_energy, L, s.mass, nearest_quantum_number(s.pair_energy, L, s.mass), dE);
  s.rap = rapidity(s.pair_energy, s.mass);
  return s;
}

std::vector<ScatterRow> parse_scatter_csv(const std::string& text) {
  std::vector<ScatterRow> rows;
  std::istringstream in(text);
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (lineno == 1 && line.find_first_of("0123456789") != 0 && line[0] != '-' && line[0] != '.') continue;  // header
    std::istringstream ls(line);
    std::string a, b, c;
    if (!std::getline(ls, a, ',') || !std::getline(ls, b, ',')) {
      throw Error(ErrorCode::ConfigParse, "line " + std::to_string(lineno) + ": expected L,E[,dE]");
    }
    std::getline(ls, c, ',');
    try {
      rows.push_back({std::stod(a), std::stod(b), c.empty() ? 0.0 : std::stod(c)});
    } catch (const std::exception&) {
      throw Error(ErrorCode::ConfigParse, "line " + std::to_string(lineno) + ": not a number");
    }
  }
  return rows;
}

std::string scatter_csv(const std::vector<ScatterRow>& rows, double m, double kink_mass) {
  if (kink_mass <= 0) kink_mass = m;
  std::ostringstream os;
  os.precision(17);
  os << "L,E,dE,n,p,delta,ddelta,theta\n";
  for (const auto& r : rows) {
    const PhaseExtraction ph = invert_energy_to_phase(r.E, r.L, m, nearest_quantum_number(r.E, r.L, m), r.dE);
    os << r.L << ',' << r.E << ',' << r.dE << ',' << ph.n << ',' << ph.p << ',' << ph.delta << ','
       << ph.delta_uncertainty << ',' << rapidity(r.E, kink_mass).theta << '\n';
  }
  return os.str();
}

}  // namespace phi4
