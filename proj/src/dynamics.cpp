#include "phi4/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "phi4/errors.hpp"

namespace phi4 {

namespace {

constexpr double kNoiseFloor = 1e-13;

void require_hermitian(const DenseOperator& H) {
  if (H.rows() != H.cols() || !is_hermitian(H, 1e-10))
    throw Error(ErrorCode::NonHermitianFragment, "fragment is not Hermitian");
}

}  // namespace

DenseOperator expm_hermitian(const DenseOperator& H, double t) {
  require_hermitian(H);
  Eigen::SelfAdjointEigenSolver<DenseOperator> es(H);
  Eigen::VectorXcd ph(H.rows());
  for (long i = 0; i < H.rows(); ++i) ph(i) = std::exp(cplx(0.0, -es.eigenvalues()(i) * t));
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

TrotterStep make_trotter_step(const std::vector<DenseOperator>& fragments, double tau) {
  if (fragments.empty()) throw Error(ErrorCode::InvalidParameter, "no fragments");
  if (!(tau > 0)) throw Error(ErrorCode::OutOfRange, "tau must be positive");
  TrotterStep s;
  s.tau = tau;
  const long n = fragments[0].rows();
  s.matrix = DenseOperator::Identity(n, n);
  for (const auto& f : fragments) {
    if (f.rows() != n) throw Error(ErrorCode::InvalidParameter, "fragment dimensions differ");
    s.half_steps.push_back(expm_hermitian(f, tau / 2));
  }
  // rightmost factor acts first
  for (const auto& u : s.half_steps) s.matrix = u * s.matrix;
  for (auto it = s.half_steps.rbegin(); it != s.half_steps.rend(); ++it) s.matrix = *it * s.matrix;
  return s;
}

DenseOperator trotter_s2(const std::vector<DenseOperator>& fragments, double tau) {
  return make_trotter_step(fragments, tau).matrix;
}

double trotter_error(const std::vector<DenseOperator>& fragments, double tau) {
  DenseOperator H = DenseOperator::Zero(fragments.at(0).rows(), fragments.at(0).cols());
  for (const auto& f : fragments) H += f;
  return spectral_norm(DenseOperator(trotter_s2(fragments, tau) - expm_hermitian(H, tau)));
}

ScalingFit trotter_error_scaling(const std::vector<DenseOperator>& fragments, const std::vector<double>& taus) {
  if (taus.size() < 4) throw Error(ErrorCode::DegenerateFit, "need at least 4 step sizes");
  const auto [lo, hi] = std::minmax_element(taus.begin(), taus.end());
  if (!(*lo > 0) || *hi / *lo < 10.0 - 1e-9) throw Error(ErrorCode::DegenerateFit, "step sizes must span a decade");
  ScalingFit fit;
  fit.taus = taus;
  for (double t : taus) fit.errors.push_back(trotter_error(fragments, t));
  if (std::all_of(fit.errors.begin(), fit.errors.end(), [](double e) { return e < kNoiseFloor; })) {
    fit.skipped = true;
    fit.status = "noise_floor";
    return fit;
  }
  std::vector<double> x, y;
  for (std::size_t i = 0; i < taus.size(); ++i)
    if (fit.errors[i] >= kNoiseFloor) {
      x.push_back(std::log(taus[i]));
      y.push_back(std::log(fit.errors[i]));
    }
  if (x.size() < 4) throw Error(ErrorCode::DegenerateFit, "too few errors above round-off");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n, my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.status = "ok";
  return fit;
}

std::vector<DenseOperator> occupation_fragments(const OccHamiltonian& h) {
  const auto basis = h.layout.basis();
  std::vector<DenseOperator> out;
  for (const auto& [name, sum] : h.fragment_split()) out.push_back(to_dense_subspace(sum, basis));
  return out;
}

std::vector<DenseOperator> amplitude_fragments(const AmpHamiltonian& h) {
  auto [kin, pot] = amp_split(h);
  return {kin, pot};
}

double alpha_comm_amp(const LatticeParams& p, const AmplitudeCutoffs& c) {
  const double M2 = p.M * p.M, d = p.d, L = p.Lambda;
  const double kd2 = static_cast<double>(c.k) * c.k * c.delta_phi * c.delta_phi;
  const double kd6 = kd2 * kd2 * kd2, kd8 = kd6 * kd2, kd10 = kd8 * kd2;
  return static_cast<double>(p.Omega) *
         (L * L / 576.0 * kd10 + L / 48.0 * (2 * M2 + 8 * d * d + 2 * d + 3) * kd8 +
          (0.25 * (M2 + d + 1) * (M2 + d + 2) + d * d * (2 * M2 + 2 * d + 11)) * kd6);
}

SpectrumResult sector_spectrum(const AmpHamiltonian& h) {
  const SectorSpectra s = sector_split(h);
  SpectrumResult r;
  std::vector<std::pair<double, std::string>> all;
  for (double e : s.even) all.emplace_back(e, "even");
  for (double e : s.odd) all.emplace_back(e, "odd");
  std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& [e, lab] : all) {
    r.eigenvalues.push_back(e);
    r.sectors.push_back(lab);
  }
  if (s.even.empty()) throw Error(ErrorCode::InvalidParameter, "empty even sector");
  r.ground_energy = s.even.front();
  r.even_gap = s.even.size() > 1 ? s.even[1] - s.even[0] : 0.0;
  r.odd_gap = s.odd.empty() ? 0.0 : s.odd.front() - s.even.front();
  return r;
}

std::string spectrum_csv(const SpectrumResult& s) {
  std::ostringstream os;
  os.precision(17);
  os << "index,eigenvalue,sector\n";
  for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) os << i << ',' << s.eigenvalues[i] << ',' << s.sectors[i] << '\n';
  return os.str();
}

}  // namespace phi4
