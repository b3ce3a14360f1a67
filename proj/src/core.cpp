#include "phi4/core.hpp"

#include <cmath>
#include <numbers>

#include "phi4/errors.hpp"

namespace phi4 {

namespace {

double require(const RawParams& raw, const char* key) {
  auto it = raw.find(key);
  if (it == raw.end()) throw Error(ErrorCode::MissingKey, std::string("missing key '") + key + "'");
  return it->second;
}

bool is_integral(double x) { return std::isfinite(x) && std::floor(x) == x; }

}  // namespace

bool is_power_of_two(long x) { return x > 0 && (x & (x - 1)) == 0; }

int ilog2(long x) {
  int r = 0;
  while (x > 1) {
    x >>= 1;
    ++r;
  }
  return r;
}

LatticeParams build_params(const RawParams& raw, bool amplitude_basis) {
  LatticeParams p;
  p.m = require(raw, "m");
  p.lambda = require(raw, "lambda");
  p.a = require(raw, "a");
  double d = require(raw, "d");
  double P = require(raw, "P");
  if (!(p.a > 0.0)) throw Error(ErrorCode::NonPositiveSpacing, "lattice spacing must be > 0");
  if (!is_integral(d) || d < 1) throw Error(ErrorCode::InvalidParameter, "d must be an integer >= 1");
  if (!is_integral(P) || P < 1) throw Error(ErrorCode::InvalidParameter, "P must be an integer >= 1");
  if (!(p.lambda >= 0.0)) throw Error(ErrorCode::InvalidParameter, "lambda must be >= 0");
  p.d = static_cast<int>(d);
  p.P = static_cast<int>(P);
  p.Omega = 1;
  for (int i = 0; i < p.d; ++i) p.Omega *= p.P;
  p.E_D = static_cast<long>(p.d) * p.Omega;
  p.M = p.a * p.m;
  p.Lambda = std::pow(p.a, 4 - p.d) * p.lambda;
  if (amplitude_basis && !is_power_of_two(p.Omega))
    throw Error(ErrorCode::NonPowerOfTwoSites, "site count " + std::to_string(p.Omega) + " is not a power of two");
  return p;
}

OccupationCutoffs make_occ_cutoffs(int N, const LatticeParams& p) {
  if (N < 1) throw Error(ErrorCode::InvalidParameter, "occupation cutoff N must be >= 1");
  return {N, p.Omega};
}

AmplitudeCutoffs make_amp_cutoffs(int k, std::optional<double> delta_phi) {
  if (k < 2 || !is_power_of_two(k)) throw Error(ErrorCode::NonPowerOfTwoCutoff, "k must be a power of two >= 2");
  AmplitudeCutoffs c;
  c.k = k;
  c.delta_phi = delta_phi ? *delta_phi : std::sqrt(std::numbers::pi / k);
  if (!(c.delta_phi > 0.0)) throw Error(ErrorCode::InvalidParameter, "delta_phi must be > 0");
  c.phi_max = k * c.delta_phi;
  c.qubits_per_site = ilog2(2L * k);
  return c;
}

double omega(double M, double p_abs) { return std::sqrt(M * M + p_abs * p_abs); }

std::vector<int> mode_coords(long mode, int P, int d) {
  std::vector<int> c(d);
  for (int i = 0; i < d; ++i) {
    c[i] = static_cast<int>(mode % P);
    mode /= P;
  }
  return c;
}

long mode_from_coords(const std::vector<int>& c, int P) {
  long m = 0;
  for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) m = m * P + c[i];
  return m;
}

long mode_add(long p, long q, int P, int d, int sign) {
  auto a = mode_coords(p, P, d);
  auto b = mode_coords(q, P, d);
  for (int i = 0; i < d; ++i) a[i] = ((a[i] + sign * b[i]) % P + P) % P;
  return mode_from_coords(a, P);
}

long site_neighbor(long x, int dim, int P, int d) {
  auto c = mode_coords(x, P, d);
  c[dim] = (c[dim] + 1) % P;
  return mode_from_coords(c, P);
}

Dispersion dispersion_table(const LatticeParams& p) {
  Dispersion t;
  const double two_pi = 2.0 * std::numbers::pi;
  t.omega_min = p.M;
  t.omega_max = p.M;
  for (long mode = 0; mode < p.Omega; ++mode) {
    auto c = mode_coords(mode, p.P, p.d);
    std::vector<int> n(p.d);
    double psq = 0.0;
    for (int i = 0; i < p.d; ++i) {
      n[i] = c[i] <= p.P / 2 ? c[i] : c[i] - p.P;
      double pi_ = two_pi * n[i] / p.P;
      psq += pi_ * pi_;
    }
    t.labels.push_back(n);
    t.p_sq.push_back(psq);
    t.omega.push_back(std::sqrt(p.M * p.M + psq));
    t.omega_max = std::max(t.omega_max, t.omega.back());
  }
  return t;
}

}  // namespace phi4
