#include "phi4/amp_model.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>

#include "phi4/errors.hpp"

namespace phi4 {

namespace {

constexpr char kMagic[8] = {'P', 'H', 'I', '4', 'D', 'N', 'S', '1'};

long local_dim(const AmplitudeCutoffs& c) { return 2L * c.k; }

void check_dense_cap(const LatticeParams& p, const AmplitudeCutoffs& c) {
  const long nq = p.Omega * c.qubits_per_site;
  if (nq > kOracleMaxQubits)
    throw Error(ErrorCode::TooManyQubits, std::to_string(nq) + " qubits exceeds the dense oracle cap");
}

std::vector<double> eigenvalues(const DenseOperator& m) {
  if (m.rows() == 0) return {};
  Eigen::SelfAdjointEigenSolver<DenseOperator> es(m, Eigen::EigenvaluesOnly);
  std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  return v;
}

}  // namespace

FamilyWeights FamilyWeights::standard(const LatticeParams& p) {
  return {0.5, 0.5 * (p.M * p.M + p.d + 1), p.Lambda / 24.0, 1.0};
}

FamilyWeights FamilyWeights::prep(const LatticeParams& p) {
  return {0.5, p.M * p.M + p.d + 1, p.Lambda / 24.0, 2.0};
}

SiteBlocks site_blocks(const AmplitudeCutoffs& c) {
  const int D = c.dim();
  SiteBlocks b;
  b.F = DenseOperator(D, D);
  const double norm = 1.0 / std::sqrt(static_cast<double>(D));
  for (int j = 0; j < D; ++j)
    for (int l = 0; l < D; ++l) {
      const double ang = -2.0 * std::numbers::pi * c.value(j) * c.value(l) / D;
      b.F(j, l) = norm * cplx(std::cos(ang), std::sin(ang));
    }
  b.phi = DenseOperator::Zero(D, D);
  for (int j = 0; j < D; ++j) b.phi(j, j) = c.value(j) * c.delta_phi;
  b.phi2 = b.phi * b.phi;
  b.phi4 = b.phi2 * b.phi2;
  b.pi = b.F.adjoint() * b.phi * b.F;
  b.pi2 = b.F.adjoint() * b.phi2 * b.F;
  return b;
}

DenseOperator embed_site(const DenseOperator& op, long x, long Omega, long dl) {
  long below = 1, above = 1;
  for (long i = 0; i < x; ++i) below *= dl;
  for (long i = x + 1; i < Omega; ++i) above *= dl;
  const long dim = below * dl * above;
  DenseOperator out = DenseOperator::Zero(dim, dim);
  for (long hi = 0; hi < above; ++hi)
    for (long r = 0; r < dl; ++r)
      for (long c = 0; c < dl; ++c) {
        const cplx v = op(r, c);
        if (v == cplx{}) continue;
        for (long lo = 0; lo < below; ++lo) out((hi * dl + r) * below + lo, (hi * dl + c) * below + lo) += v;
      }
  return out;
}

double equal_weight_l1(const LatticeParams& p, const AmplitudeCutoffs& c, const FamilyWeights& w) {
  const double k2d2 = static_cast<double>(c.k) * c.k * c.delta_phi * c.delta_phi;
  return p.Omega * ((w.pi2 + w.phi2) * k2d2 + w.phi4 * k2d2 * k2d2) + p.E_D * w.phiphi * k2d2;
}

AmpHamiltonian build_amp_hamiltonian(const LatticeParams& params, const AmplitudeCutoffs& cutoffs) {
  return build_amp_hamiltonian(params, cutoffs, FamilyWeights::standard(params));
}

AmpHamiltonian build_amp_hamiltonian(const LatticeParams& params, const AmplitudeCutoffs& cutoffs,
                                     const FamilyWeights& w) {
  check_dense_cap(params, cutoffs);
  AmpHamiltonian h;
  h.params = params;
  h.cutoffs = cutoffs;
  h.weights = w;
  h.blocks = site_blocks(cutoffs);
  h.coeff_1norm = equal_weight_l1(params, cutoffs, w);
  const long dl = local_dim(cutoffs), V = params.Omega;
  const DenseOperator onsite = w.pi2 * h.blocks.pi2 + w.phi2 * h.blocks.phi2 + w.phi4 * h.blocks.phi4;
  long dim = 1;
  for (long x = 0; x < V; ++x) dim *= dl;
  h.dense = DenseOperator::Zero(dim, dim);
  for (long x = 0; x < V; ++x) h.dense += embed_site(onsite, x, V, dl);
  for (long x = 0; x < V; ++x)
    for (int i = 0; i < params.d; ++i) {
      const long y = site_neighbor(x, i, params.P, params.d);
      const DenseOperator fx = embed_site(h.blocks.phi, x, V, dl);
      const DenseOperator fy = embed_site(h.blocks.phi, y, V, dl);
      h.dense -= w.phiphi * (fx * fy);
    }
  return h;
}

std::pair<DenseOperator, DenseOperator> amp_split(const AmpHamiltonian& h) {
  const long dl = local_dim(h.cutoffs), V = h.params.Omega;
  DenseOperator kin = DenseOperator::Zero(h.dense.rows(), h.dense.cols());
  for (long x = 0; x < V; ++x) kin += embed_site(h.weights.pi2 * h.blocks.pi2, x, V, dl);
  return {kin, h.dense - kin};
}

double phi_max_for_energy(double E_max, double tail_prob, const LatticeParams& params) {
  if (!(E_max > 0.0)) throw Error(ErrorCode::NonPositiveEnergy, "E_max must be > 0");
  if (!(tail_prob > 0.0 && tail_prob < 1.0)) throw Error(ErrorCode::OutOfRange, "tail probability must lie in (0,1)");
  const double C = params.M * params.M + 3.0 * params.d + params.Lambda / 24.0 + 1.5;
  return std::pow(tail_prob * E_max / (C * params.Omega), 0.25);
}

long SectorProjector::apply(long state) const {
  const long dl = 2L * k;
  long out = 0, mul = 1;
  for (long x = 0; x < Omega; ++x) {
    out += map_site(static_cast<int>(state % dl), k) * mul;
    state /= dl;
    mul *= dl;
  }
  return out;
}

DenseOperator SectorProjector::dense() const {
  long dim = 1;
  for (long x = 0; x < Omega; ++x) dim *= 2L * k;
  DenseOperator U = DenseOperator::Zero(dim, dim);
  for (long s = 0; s < dim; ++s) U(apply(s), s) = 1.0;
  return U;
}

std::vector<long> SectorProjector::symmetric_basis() const {
  const long dl = 2L * k;
  long dim = 1;
  for (long x = 0; x < Omega; ++x) dim *= dl;
  std::vector<long> out;
  for (long s = 0; s < dim; ++s) {
    bool ok = true;
    for (long r = s, x = 0; x < Omega; ++x, r /= dl)
      if (r % dl == dl - 1) ok = false;
    if (ok) out.push_back(s);
  }
  return out;
}

SectorSpectra sector_split(const AmpHamiltonian& h) {
  check_dense_cap(h.params, h.cutoffs);
  SectorProjector U{h.cutoffs.k, h.params.Omega, +1};
  const auto S = U.symmetric_basis();
  const long dim = h.dense.rows();
  std::vector<Eigen::VectorXcd> ev, od;
  std::vector<bool> seen(dim, false);
  for (long s : S) {
    if (seen[s]) continue;
    const long t = U.apply(s);
    seen[s] = seen[t] = true;
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(dim);
    if (t == s) {
      e(s) = 1.0;
      ev.push_back(e);
      continue;
    }
    const double r = 1.0 / std::sqrt(2.0);
    e(s) = r;
    e(t) = r;
    ev.push_back(e);
    Eigen::VectorXcd o = Eigen::VectorXcd::Zero(dim);
    o(s) = r;
    o(t) = -r;
    od.push_back(o);
  }
  auto compress = [&](const std::vector<Eigen::VectorXcd>& vs) {
    DenseOperator V(dim, static_cast<long>(vs.size()));
    for (std::size_t i = 0; i < vs.size(); ++i) V.col(static_cast<long>(i)) = vs[i];
    return DenseOperator(V.adjoint() * h.dense * V);
  };
  SectorSpectra out;
  out.even = eigenvalues(compress(ev));
  out.odd = eigenvalues(compress(od));
  DenseOperator HS(static_cast<long>(S.size()), static_cast<long>(S.size()));
  for (std::size_t i = 0; i < S.size(); ++i)
    for (std::size_t j = 0; j < S.size(); ++j) HS(static_cast<long>(i), static_cast<long>(j)) = h.dense(S[i], S[j]);
  out.symmetric = eigenvalues(HS);
  return out;
}

ResourceCount controlled_negation_cost(const AmplitudeCutoffs& cutoffs, long Omega, bool reuse_ancilla) {
  if (!is_power_of_two(cutoffs.k)) throw Error(ErrorCode::NonPowerOfTwoCutoff, "k must be a power of two");
  const std::int64_t m = cutoffs.qubits_per_site;
  ResourceCount r;
  // sum_{n=3}^{m} (n-1) ANDs for the C^nX ladder plus (m-1) more, four T each
  std::int64_t ands = m - 1;
  for (std::int64_t n = 3; n <= m; ++n) ands += n - 1;
  r.t = Omega * 4 * ands;
  std::int64_t cnx_anc = 0;
  for (std::int64_t n = 3; n <= m; ++n) cnx_anc += n - 2;
  const std::int64_t per_site = (m - 2) + cnx_anc;
  r.ancilla = reuse_ancilla ? 1 + per_site : Omega * per_site + 1;
  return r;
}

void export_dense(const std::string& path, const DenseOperator& m) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::IoError, "cannot open " + path);
  const std::uint64_t dim = static_cast<std::uint64_t>(m.rows());
  os.write(kMagic, 8);
  os.write(reinterpret_cast<const char*>(&dim), 8);
  os.write(reinterpret_cast<const char*>(m.data()), static_cast<std::streamsize>(sizeof(cplx) * m.size()));
  if (!os) throw Error(ErrorCode::IoError, "write failed for " + path);
}

DenseOperator import_dense(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::IoError, "cannot open " + path);
  char magic[8];
  std::uint64_t dim = 0;
  is.read(magic, 8);
  is.read(reinterpret_cast<char*>(&dim), 8);
  if (!is || std::memcmp(magic, kMagic, 8) != 0) throw Error(ErrorCode::IoError, "bad header in " + path);
  DenseOperator m(static_cast<long>(dim), static_cast<long>(dim));
  is.read(reinterpret_cast<char*>(m.data()), static_cast<std::streamsize>(sizeof(cplx) * m.size()));
  if (!is) throw Error(ErrorCode::IoError, "truncated payload in " + path);
  return m;
}

}  // namespace phi4
