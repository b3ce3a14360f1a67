#include "phi4/encoding.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numbers>

#include "json.hpp"
#include "phi4/errors.hpp"
#include "phi4/lcu.hpp"

namespace phi4 {

namespace {

// Above this many qubits the walk operator is applied implicitly.
constexpr int kMaterializeQubits = 11;

double lg(double x) { return std::log2(x); }

double binom(double x, int r) {
  double out = 1.0;
  for (int i = 0; i < r; ++i) out *= (x - i) / (i + 1);
  return out;
}

// T cost of a grouped C^M X selection, 4 sqrt(M)(log M - 2) + c M, floored at zero for tiny M.
double mcx_group(double M, double c) {
  if (M <= 0) return 0.0;
  return std::max(0.0, 4.0 * std::sqrt(M) * (lg(M) - 2.0) + c * M);
}

double cnot_group(double M, double c) {
  if (M <= 0) return 0.0;
  return std::max(0.0, std::sqrt(M) * (4.0 * lg(M) - 6.0) + c * M);
}

long ceil_log2(double x) { return x <= 1.0 ? 0 : static_cast<long>(std::ceil(lg(x) - 1e-12)); }

long ipow_l(long b, long e) {
  long r = 1;
  while (e-- > 0) r *= b;
  return r;
}

// diag of Z_mask placed on the qubits of `site`
Eigen::VectorXd z_on_site(std::uint32_t mask, long site, int q, long dim) {
  Eigen::VectorXd d(dim);
  for (long s = 0; s < dim; ++s) {
    const auto local = static_cast<std::uint32_t>((s >> (site * q)) & ((1L << q) - 1));
    d(s) = (std::popcount(local & mask) & 1) ? -1.0 : 1.0;
  }
  return d;
}

// a per-site diagonal lifted to the whole register
Eigen::VectorXd lift_site(const std::vector<int>& local, long site, int q, long dim) {
  Eigen::VectorXd d(dim);
  for (long s = 0; s < dim; ++s) d(s) = local[static_cast<std::size_t>((s >> (site * q)) & ((1L << q) - 1))];
  return d;
}

void push_term(std::vector<SelectTerm>& out, double c, Eigen::VectorXd diag, long fourier, long site) {
  if (std::abs(c) < 1e-15) return;
  if (c < 0) {
    c = -c;
    diag = -diag;
  }
  out.push_back({c, std::move(diag), fourier, site});
}

// family decomposition, scaled by w * delta^p
void push_family(std::vector<SelectTerm>& out, const LcuDecomposition& d, double scale, long site, long fourier,
                 int q, long dim, bool drop_identity) {
  for (const auto& t : d.terms) {
    if (drop_identity && t.unitary.kind == UnitaryDescriptor::Kind::identity) continue;
    const double c = scale * static_cast<double>(t.num) / static_cast<double>(d.denom);
    push_term(out, c, lift_site(t.unitary.diagonal(), site, q, dim), fourier, site);
  }
}

// Z-string expansion of a real diagonal over `bits` qubits, identity at index 0.
std::vector<double> walsh(std::vector<double> a) {
  const std::size_t D = a.size();
  for (std::size_t h = 1; h < D; h <<= 1)
    for (std::size_t i = 0; i < D; i += 2 * h)
      for (std::size_t j = i; j < i + h; ++j) {
        const double x = a[j], y = a[j + h];
        a[j] = x + y;
        a[j + h] = x - y;
      }
  for (auto& x : a) x /= static_cast<double>(D);
  return a;
}

Eigen::VectorXd z_full(std::size_t mask, long dim) {
  Eigen::VectorXd d(dim);
  for (long s = 0; s < dim; ++s) d(s) = (std::popcount(static_cast<std::size_t>(s) & mask) & 1) ? -1.0 : 1.0;
  return d;
}

long first_site(std::size_t mask, int q) { return static_cast<long>(std::countr_zero(mask)) / q; }

std::vector<SelectTerm> terms_alg1(const LatticeParams& p, const AmplitudeCutoffs& c, const FamilyWeights& w,
                                   int q, long dim, double& offset) {
  std::vector<SelectTerm> out;
  const double D = c.delta_phi;
  const auto e1 = lcu_equal_weight(c.k, 1), e2 = lcu_equal_weight(c.k, 2), e4 = lcu_equal_weight(c.k, 4);
  for (long x = 0; x < p.Omega; ++x) {
    push_family(out, e2, w.pi2 * D * D, x, x, q, dim, false);
    push_family(out, e2, w.phi2 * D * D, x, -1, q, dim, false);
    push_family(out, e4, w.phi4 * std::pow(D, 4), x, -1, q, dim, false);
  }
  for (long x = 0; x < p.Omega; ++x)
    for (int i = 0; i < p.d; ++i) {
      const long y = site_neighbor(x, i, p.P, p.d);
      for (const auto& a : e1.terms)
        for (const auto& b : e1.terms) {
          const double cf = -w.phiphi * D * D * static_cast<double>(a.num * b.num) / static_cast<double>(e1.denom * e1.denom);
          const Eigen::VectorXd da = lift_site(a.unitary.diagonal(), x, q, dim);
          const Eigen::VectorXd db = lift_site(b.unitary.diagonal(), y, q, dim);
          push_term(out, cf, da.cwiseProduct(db), -1, x);
        }
    }
  offset = 0.0;
  return out;
}

// diagonal part (phi^2, phi^4, phi phi) as one Z-string expansion, kinetic part per site
std::vector<SelectTerm> terms_alg3a(const LatticeParams& p, const AmplitudeCutoffs& c, const FamilyWeights& w,
                                    int q, long dim, double& offset) {
  std::vector<SelectTerm> out;
  const double D = c.delta_phi;
  std::vector<double> diag(static_cast<std::size_t>(dim), 0.0);
  auto val = [&](long s, long x) { return c.value(static_cast<int>((s >> (x * q)) & ((1L << q) - 1))) * D; };
  for (long s = 0; s < dim; ++s) {
    double e = 0.0;
    for (long x = 0; x < p.Omega; ++x) {
      const double f = val(s, x);
      e += w.phi2 * f * f + w.phi4 * f * f * f * f;
      for (int i = 0; i < p.d; ++i) e -= w.phiphi * f * val(s, site_neighbor(x, i, p.P, p.d));
    }
    diag[static_cast<std::size_t>(s)] = e;
  }
  const auto wc = walsh(diag);
  offset = wc[0];
  for (std::size_t m = 1; m < wc.size(); ++m)
    if (std::abs(wc[m]) > 1e-13) push_term(out, wc[m], z_full(m, dim), -1, first_site(m, q));
  const int D2 = c.dim();
  std::vector<double> sq(static_cast<std::size_t>(D2));
  for (int b = 0; b < D2; ++b) sq[static_cast<std::size_t>(b)] = w.pi2 * std::pow(c.value(b) * D, 2);
  const auto kc = walsh(sq);
  for (long x = 0; x < p.Omega; ++x) {
    offset += kc[0];
    for (std::size_t m = 1; m < kc.size(); ++m)
      if (std::abs(kc[m]) > 1e-13) push_term(out, kc[m], z_on_site(static_cast<std::uint32_t>(m), x, q, dim), x, x);
  }
  return out;
}

// signature families per site with identities removed, edges by Z-binary products
std::vector<SelectTerm> terms_alg3b(const LatticeParams& p, const AmplitudeCutoffs& c, const FamilyWeights& w,
                                    int q, long dim, double& offset) {
  std::vector<SelectTerm> out;
  const double D = c.delta_phi;
  const auto s2 = lcu_signature(c.k, 2), s4 = lcu_signature(c.k, 4);
  auto id_part = [](const LcuDecomposition& d) {
    double s = 0.0;
    for (const auto& t : d.terms)
      if (t.unitary.kind == UnitaryDescriptor::Kind::identity) s += static_cast<double>(t.num) / d.denom;
    return s;
  };
  offset = 0.0;
  for (long x = 0; x < p.Omega; ++x) {
    push_family(out, s2, w.pi2 * D * D, x, x, q, dim, true);
    push_family(out, s2, w.phi2 * D * D, x, -1, q, dim, true);
    push_family(out, s4, w.phi4 * std::pow(D, 4), x, -1, q, dim, true);
    offset += (w.pi2 + w.phi2) * D * D * id_part(s2) + w.phi4 * std::pow(D, 4) * id_part(s4);
  }
  const auto z1 = lcu_z_binary(c.k, 1);
  for (long x = 0; x < p.Omega; ++x)
    for (int i = 0; i < p.d; ++i) {
      const long y = site_neighbor(x, i, p.P, p.d);
      for (const auto& a : z1.terms)
        for (const auto& b : z1.terms) {
          const double cf = -w.phiphi * D * D * static_cast<double>(a.num * b.num) / static_cast<double>(z1.denom * z1.denom);
          const bool ida = a.unitary.kind == UnitaryDescriptor::Kind::identity;
          const bool idb = b.unitary.kind == UnitaryDescriptor::Kind::identity;
          if (ida && idb) {
            offset += cf;
            continue;
          }
          const Eigen::VectorXd da = lift_site(a.unitary.diagonal(), x, q, dim);
          const Eigen::VectorXd db = lift_site(b.unitary.diagonal(), y, q, dim);
          push_term(out, cf, da.cwiseProduct(db), -1, x);
        }
    }
  return out;
}

void materialize(BlockEncoding& be) {
  const long sd = be.system_dim(), id = be.index_dim(), dim = sd * id;
  if (be.index_qubits + ilog2(sd) > kMaterializeQubits) return;
  DenseOperator S = DenseOperator::Zero(dim, dim);
  for (long i = 0; i < id; ++i) {
    const DenseOperator U = static_cast<std::size_t>(i) < be.terms.size()
                                ? be.term_unitary(static_cast<std::size_t>(i))
                                : DenseOperator::Identity(sd, sd);
    S.block(i * sd, i * sd, sd, sd) = U;
  }
  be.dense_select = std::move(S);
  const Eigen::VectorXd p = be.prep_amplitudes();
  Eigen::MatrixXd H = Eigen::MatrixXd::Identity(id, id);
  Eigen::VectorXd u = -p;
  u(0) += 1.0;
  if (u.norm() > 1e-14) {
    u.normalize();
    H -= 2.0 * u * u.transpose();
  }
  DenseOperator P = DenseOperator::Zero(dim, dim);
  for (long a = 0; a < id; ++a)
    for (long b = 0; b < id; ++b)
      if (H(a, b) != 0.0) P.block(a * sd, b * sd, sd, sd).diagonal().setConstant(H(a, b));
  be.dense_prep = std::move(P);
}

void apply_tally(BlockEncoding& be, const EncodingTally& t) {
  be.tally = t;
  be.t_count = t.t_count;
  be.rz_count = t.rz_count;
  be.aqft_count = t.aqft_count;
  be.ancilla_qubits = t.ancilla_qubits;
}

}  // namespace

const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::I_equal_weight: return "I_equal_weight";
    case Algorithm::IIIa_z_lcu: return "IIIa_z_lcu";
    case Algorithm::IIIb_signature: return "IIIb_signature";
  }
  return "?";
}

std::array<double, 4> build_prep_f(const LatticeParams& params) {
  const FamilyWeights w = FamilyWeights::prep(params);
  const std::array<double, 4> v{w.pi2, w.phi2, w.phi4, w.phiphi};
  double s = 0.0;
  for (double x : v) {
    if (x < 0) throw Error(ErrorCode::InvalidParameter, "PREP_F weights must be nonnegative");
    s += x;
  }
  std::array<double, 4> out{};
  for (int i = 0; i < 4; ++i) out[static_cast<std::size_t>(i)] = std::sqrt(v[static_cast<std::size_t>(i)] / s);
  return out;
}

EncodingTally encoding_tally(Algorithm alg, const LatticeParams& p, int k, const EncodingOptions& opt) {
  if (k < 2) throw Error(ErrorCode::InvalidParameter, "k must be >= 2");
  EncodingTally t;
  const double V = static_cast<double>(p.Omega), E = static_cast<double>(p.E_D), d = p.d;
  const double lk = lg(k);
  const double field = V * lg(2.0 * k);
  switch (alg) {
    case Algorithm::I_equal_weight: {
      const double phiphi = 4 * V * (2 * d + lk + 2) - 4;
      const double phi2 = 8 * V * (4 * lk * lk + 11 * lk + 1) - 4;
      const double pi2 = phi2;
      const double phi4 = opt.phi4_short_form ? 8 * V * (lk * lk - 6 * lk - 7) - 4
                                             : 2 * V * (20 * lk * lk + 38 * lk + 2 * lg(V) + 15);
      t.breakdown = {{"phiphi", phiphi}, {"phi2", phi2}, {"pi2", pi2}, {"phi4", phi4}};
      t.t_count = phiphi + phi2 + pi2 + phi4;
      t.rz_count = 24;  // PREP_F and its inverse
      t.aqft_count = 2 * V;
      t.logical_qubits = field + 18 * lk * lk + 60 * lk + lg(V * d) + 29;
      t.ancilla_qubits = static_cast<long>(std::ceil(t.logical_qubits - field - 1e-9));
      break;
    }
    case Algorithm::IIIa_z_lcu: {
      const double L1 = lk + 1, L2 = binom(lk + 1, 2), L3 = binom(lk + 1, 3), L4 = binom(lk + 1, 4);
      const double L5 = (lk + 1) * (lk + 1);
      const double site = V * (mcx_group(L1 + L2, 12) + mcx_group(L3 + L4, 12));
      const double edge = E * mcx_group(L5, 8);
      const double sel = mcx_group(V, 4) + mcx_group(E, 4);
      t.breakdown = {{"site", site}, {"edge", edge}, {"selection", sel}};
      t.t_count = site + edge + sel;
      t.rz_count = 4 * (L1 + L2) + 2 * (L3 + L4) + 2 * L5 - 4;
      t.aqft_count = 2 * V;
      t.cnot_count = V * (cnot_group(L1 + L2, 14) + cnot_group(L3 + L4, 14)) + E * cnot_group(L5, 10) +
                     cnot_group(V, 5) + cnot_group(E, 5) + 2 * (2 * (L1 + L2) + L3 + L4 + L5) +
                     3 * (lg(L1 + L2) + (L3 + L4 > 0 ? lg(L3 + L4) : 0.0) + lg(L5)) - 21;
      t.ancilla_qubits = ceil_log2(V) + ceil_log2(lk);
      t.logical_qubits = field + lg(V) + (lk > 1 ? lg(lk) : 0.0);
      break;
    }
    case Algorithm::IIIb_signature: {
      if (!opt.conjecture_iiib)
        throw Error(ErrorCode::ConjectureFlagRequired, "signature-matrix totals rest on an unproven bit-pattern conjecture");
      const double site = V * (mcx_group(2 * lk, 8) + mcx_group(4 * lk, 16));
      const double sel = mcx_group(V, 4);
      const double edge = E * (8 * (lk + 1) * (lg(lk + 1) - 1) + 4 * (lk + 1) * (lk + 1) + 4) +
                          std::max(0.0, 4 * std::sqrt(E) * (lg(E) - 2));
      const long L = static_cast<long>(std::ceil(lk - 1e-12));
      double s2 = 0, s4 = 0;
      for (long l = 1; l <= 2 * L + 1; ++l) s2 += static_cast<double>(std::min(l, L));
      for (long l = 1; l <= 4 * L + 1; ++l) s4 += static_cast<double>(std::min(l, L));
      const double conj = V * opt.kappa * (2 * s2 + s4);
      t.breakdown = {{"site", site}, {"selection", sel}, {"edge", edge}, {"signature_conjecture", conj}};
      t.t_count = site + sel + edge + conj;
      t.rz_count = 12 * lk + 2 * (lk + 1) * (lk + 1) - 3;
      t.aqft_count = 2 * V;
      t.cnot_count = V * (cnot_group(2 * lk, 10) + cnot_group(4 * lk, 20) + 5) +
                     std::max(0.0, std::sqrt(V) * (4 * lg(V) - 6)) +
                     E * ((lk + 1) * (8 * lg(lk + 1) - 6) + 5 * (lk + 1) * (lk + 1) + 5) +
                     std::max(0.0, std::sqrt(E) * (4 * lg(E) - 6));
      t.ancilla_qubits = ceil_log2(V) + ceil_log2(lk);
      t.logical_qubits = field + lg(V) + (lk > 1 ? lg(lk) : 0.0);
      break;
    }
  }
  return t;
}

double alpha_bound(Algorithm alg, const LatticeParams& p, const AmplitudeCutoffs& c, const FamilyWeights& w) {
  switch (alg) {
    case Algorithm::I_equal_weight: return equal_weight_l1(p, c, w);
    case Algorithm::IIIa_z_lcu: return l1_norm_hamp(p, c, L1Variant::z_binary_decomposition);
    case Algorithm::IIIb_signature: return l1_norm_hamp(p, c, L1Variant::signature_decomposition);
  }
  return 0.0;
}

double encoding_alpha(Algorithm alg, const LatticeParams& p, const AmplitudeCutoffs& c, const FamilyWeights& w) {
  if (alg == Algorithm::I_equal_weight) return equal_weight_l1(p, c, w);
  if (!is_power_of_two(c.k)) return alpha_bound(alg, p, c, w);
  const double D = c.delta_phi, V = static_cast<double>(p.Omega), E = static_cast<double>(p.E_D);
  const int n = c.dim();
  auto nonid_l1 = [](const std::vector<double>& f) {
    const auto wc = walsh(f);
    double s = 0.0;
    for (std::size_t m = 1; m < wc.size(); ++m) s += std::abs(wc[m]);
    return s;
  };
  // Phi/delta = 1/2 I + sum_a c_a Z_a with sum_a |c_a| = k - 1/2
  const double half = 0.5, phi_nonid = c.k - 0.5;
  if (alg == Algorithm::IIIa_z_lcu) {
    const bool self_edges = p.P == 1;
    std::vector<double> f(static_cast<std::size_t>(n)), kin(static_cast<std::size_t>(n));
    for (int b = 0; b < n; ++b) {
      const double v = c.value(b), x = v * D;
      double e = w.phi2 * x * x + w.phi4 * x * x * x * x;
      // single-site pieces of the 2d incident edges, or the folded self edges on a one-site lattice
      e += self_edges ? -p.d * w.phiphi * x * x : -2.0 * p.d * w.phiphi * D * D * half * v;
      f[static_cast<std::size_t>(b)] = e;
      kin[static_cast<std::size_t>(b)] = w.pi2 * x * x;
    }
    double a = V * (nonid_l1(f) + nonid_l1(kin));
    if (!self_edges) a += E * w.phiphi * D * D * phi_nonid * phi_nonid;
    return a;
  }
  auto sig_nonid = [](const LcuDecomposition& d) {
    double s = 0.0;
    for (const auto& t : d.terms)
      if (t.unitary.kind != UnitaryDescriptor::Kind::identity) s += std::abs(static_cast<double>(t.num)) / d.denom;
    return s;
  };
  const double s2 = sig_nonid(lcu_signature(c.k, 2)), s4 = sig_nonid(lcu_signature(c.k, 4));
  const double full = half + phi_nonid;
  return V * ((w.pi2 + w.phi2) * D * D * s2 + w.phi4 * std::pow(D, 4) * s4) +
         E * w.phiphi * D * D * (full * full - half * half);
}

long BlockEncoding::system_dim() const { return ipow_l(2L * cutoffs.k, params.Omega); }

Eigen::VectorXd BlockEncoding::prep_amplitudes() const {
  Eigen::VectorXd p = Eigen::VectorXd::Zero(index_dim());
  for (std::size_t i = 0; i < terms.size(); ++i) p(static_cast<long>(i)) = std::sqrt(terms[i].coeff / alpha);
  return p;
}

Eigen::VectorXcd BlockEncoding::apply_term(std::size_t i, const Eigen::VectorXcd& v) const {
  const SelectTerm& t = terms[i];
  if (t.fourier_site < 0) return t.diag.cast<cplx>().cwiseProduct(v);
  const DenseOperator& F = site_fourier[static_cast<std::size_t>(t.fourier_site)];
  return F.adjoint() * t.diag.cast<cplx>().cwiseProduct(F * v);
}

DenseOperator BlockEncoding::term_unitary(std::size_t i) const {
  const SelectTerm& t = terms[i];
  DenseOperator D = t.diag.cast<cplx>().asDiagonal();
  if (t.fourier_site < 0) return D;
  const DenseOperator& F = site_fourier[static_cast<std::size_t>(t.fourier_site)];
  return F.adjoint() * D * F;
}

Eigen::VectorXcd BlockEncoding::apply_select(const Eigen::VectorXcd& v) const {
  if (dense_select) return *dense_select * v;
  const long sd = system_dim();
  Eigen::VectorXcd out = v;
  for (std::size_t i = 0; i < terms.size(); ++i)
    out.segment(static_cast<long>(i) * sd, sd) = apply_term(i, v.segment(static_cast<long>(i) * sd, sd));
  return out;
}

Eigen::VectorXcd BlockEncoding::apply_prep(const Eigen::VectorXcd& v) const {
  if (dense_prep) return *dense_prep * v;
  // Householder reflection I - 2uu^T with u proportional to e0 - p
  const long sd = system_dim(), id = index_dim();
  Eigen::VectorXd u = -prep_amplitudes();
  u(0) += 1.0;
  if (u.norm() < 1e-14) return v;
  u.normalize();
  Eigen::VectorXcd proj = Eigen::VectorXcd::Zero(sd);
  for (long a = 0; a < id; ++a) proj += u(a) * v.segment(a * sd, sd);
  Eigen::VectorXcd out = v;
  for (long a = 0; a < id; ++a) out.segment(a * sd, sd) -= 2.0 * u(a) * proj;
  return out;
}

DenseOperator BlockEncoding::encoded_operator() const {
  const long sd = system_dim();
  DenseOperator out = DenseOperator::Zero(sd, sd);
  for (std::size_t i = 0; i < terms.size(); ++i) out += terms[i].coeff * term_unitary(i);
  return out;
}

std::string BlockEncoding::to_json() const {
  nlohmann::ordered_json j;
  j["algorithm"] = algorithm_name(algorithm);
  j["alpha"] = alpha;
  j["t_count"] = t_count;
  j["rz_count"] = rz_count;
  j["aqft_count"] = aqft_count;
  j["ancilla_qubits"] = ancilla_qubits;
  return j.dump();
}

BlockEncoding build_block_encoding(Algorithm alg, const LatticeParams& params, const AmplitudeCutoffs& cutoffs,
                                   bool dense, const EncodingOptions& opt) {
  BlockEncoding be;
  be.algorithm = alg;
  be.params = params;
  be.cutoffs = cutoffs;
  be.weights = opt.weights ? *opt.weights
                           : (alg == Algorithm::I_equal_weight ? FamilyWeights::prep(params) : FamilyWeights::standard(params));
  apply_tally(be, encoding_tally(alg, params, cutoffs.k, opt));
  const FamilyWeights& w = be.weights;
  be.alpha_bound = alpha_bound(alg, params, cutoffs, w);
  if (!dense) {
    be.alpha = encoding_alpha(alg, params, cutoffs, w);
    return be;
  }
  if (!is_power_of_two(cutoffs.k)) throw Error(ErrorCode::NonPowerOfTwoCutoff, "dense encodings need k a power of two");
  const int q = ilog2(2L * cutoffs.k);
  const long nq = params.Omega * q;
  if (nq > kOracleMaxQubits) throw Error(ErrorCode::TooManyQubits, std::to_string(nq) + " system qubits");
  const long dim = 1L << nq;
  switch (alg) {
    case Algorithm::I_equal_weight: be.terms = terms_alg1(params, cutoffs, w, q, dim, be.identity_offset); break;
    case Algorithm::IIIa_z_lcu: be.terms = terms_alg3a(params, cutoffs, w, q, dim, be.identity_offset); break;
    case Algorithm::IIIb_signature: be.terms = terms_alg3b(params, cutoffs, w, q, dim, be.identity_offset); break;
  }
  if (be.terms.empty()) {
    // zero Hamiltonian: +I and -I with equal weight keep PREP well defined and encode 0 exactly
    be.terms.push_back({0.5, Eigen::VectorXd::Ones(dim), -1, 0});
    be.terms.push_back({0.5, -Eigen::VectorXd::Ones(dim), -1, 0});
  }
  double a = 0.0;
  for (const auto& t : be.terms) a += t.coeff;
  be.alpha = a > 0 ? a : 1.0;
  be.index_qubits = static_cast<int>(ceil_log2(static_cast<double>(be.terms.size())));
  if (be.index_qubits + nq > kOracleMaxQubits)
    throw Error(ErrorCode::TooManyQubits, std::to_string(be.index_qubits + nq) + " qubits with the index register");
  const SiteBlocks blocks = site_blocks(cutoffs);
  for (long x = 0; x < params.Omega; ++x) be.site_fourier.push_back(embed_site(blocks.F, x, params.Omega, 2L * cutoffs.k));
  be.dense = true;
  materialize(be);
  return be;
}

AmpHamiltonian encoded_hamiltonian(const BlockEncoding& be) {
  return build_amp_hamiltonian(be.params, be.cutoffs, be.weights);
}

double verify_block_identity(const BlockEncoding& be, const AmpHamiltonian& h) {
  if (!be.dense) throw Error(ErrorCode::MissingDense, "block encoding has no dense realisation");
  const long sd = be.system_dim(), id = be.index_dim();
  if (h.dense.rows() != sd) throw Error(ErrorCode::InvalidParameter, "Hamiltonian dimension mismatch");
  DenseOperator block(sd, sd);
  for (long s = 0; s < sd; ++s) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(sd * id);
    v(s) = 1.0;
    const Eigen::VectorXcd w = be.apply_prep(be.apply_select(be.apply_prep(v)));  // PREP is its own inverse
    block.col(s) = w.head(sd);
  }
  DenseOperator target = h.dense;
  target.diagonal().array() -= be.identity_offset;
  target /= be.alpha;
  return (block - target).cwiseAbs().maxCoeff();
}

Eigen::VectorXcd WalkOperator::apply(const Eigen::VectorXcd& v) const {
  if (dense.size() > 0) return dense * v;
  const Eigen::VectorXcd s = source.apply_select(v);
  // 2 PREP|0><0|PREP^dag - I = PREP (2|0><0| - I) PREP
  Eigen::VectorXcd t = source.apply_prep(s);
  t.tail(t.size() - source.system_dim()) *= -1.0;
  return source.apply_prep(t);
}

WalkOperator build_walk(const BlockEncoding& be, const AmpHamiltonian& h) {
  if (!be.dense) throw Error(ErrorCode::MissingDense, "walk operator needs a dense block encoding");
  const long sd = be.system_dim();
  for (std::size_t i = 0; i < be.terms.size(); ++i) {
    const Eigen::VectorXd& d = be.terms[i].diag;
    if (((d.array().abs() - 1.0).abs() > 1e-12).any())
      throw Error(ErrorCode::SelectNotInvolution, "SELECT branch is not a signature matrix");
  }
  if (h.dense.rows() != sd) throw Error(ErrorCode::InvalidParameter, "Hamiltonian dimension mismatch");
  WalkOperator w;
  w.alpha = be.alpha;
  w.source = be;
  if (!be.dense_select) return w;
  // SELECT is block diagonal, so S^2 = I reduces to each block squaring to I
  const DenseOperator& S = *be.dense_select;
  const long id = be.index_dim();
  for (long a = 0; a < id; ++a) {
    const auto B = S.block(a * sd, a * sd, sd, sd);
    const double r = (B * B - DenseOperator::Identity(sd, sd)).cwiseAbs().maxCoeff();
    if (r > 1e-12) throw Error(ErrorCode::SelectNotInvolution, "SELECT^2 differs from I by " + std::to_string(r));
  }
  // W = (2 (pp^T x I) - I) S, assembled block by block
  const Eigen::VectorXd p = be.prep_amplitudes();
  w.dense = DenseOperator::Zero(S.rows(), S.cols());
  for (long a = 0; a < id; ++a)
    for (long b = 0; b < id; ++b) {
      const double c = 2.0 * p(a) * p(b) - (a == b ? 1.0 : 0.0);
      if (c != 0.0) w.dense.block(a * sd, b * sd, sd, sd) = c * S.block(b * sd, b * sd, sd, sd);
    }
  return w;
}

WalkPhaseCheck check_walk_phases(const WalkOperator& w, const AmpHamiltonian& h) {
  const BlockEncoding& be = w.source;
  const long sd = be.system_dim(), dim = sd * be.index_dim();
  DenseOperator Henc = h.dense;
  Henc.diagonal().array() -= be.identity_offset;
  Eigen::SelfAdjointEigenSolver<DenseOperator> es(Henc);
  const Eigen::VectorXd p = be.prep_amplitudes();
  WalkPhaseCheck out;
  for (long q = 0; q < sd; ++q) {
    const double c_exp = std::clamp(es.eigenvalues()(q) / w.alpha, -1.0, 1.0);
    const double theta = std::acos(c_exp);
    Eigen::VectorXcd v0(dim);
    for (long a = 0; a < be.index_dim(); ++a) v0.segment(a * sd, sd) = p(a) * es.eigenvectors().col(q);
    const Eigen::VectorXcd s = be.apply_select(v0);
    const cplx c = v0.dot(s);
    Eigen::VectorXcd v1 = s - c * v0;
    const double n = v1.norm();
    double measured;
    if (n < 1e-9) {
      const Eigen::VectorXcd wv = w.apply(v0);
      const cplx lam = v0.dot(wv);
      out.max_invariance_residual = std::max(out.max_invariance_residual, (wv - lam * v0).norm());
      measured = std::abs(std::arg(lam));
    } else {
      v1 /= n;
      const Eigen::VectorXcd w0 = w.apply(v0), w1 = w.apply(v1);
      Eigen::Matrix2cd B;
      B << v0.dot(w0), v0.dot(w1), v1.dot(w0), v1.dot(w1);
      const double res = std::max((w0 - B(0, 0) * v0 - B(1, 0) * v1).norm(), (w1 - B(0, 1) * v0 - B(1, 1) * v1).norm());
      out.max_invariance_residual = std::max(out.max_invariance_residual, res);
      Eigen::ComplexEigenSolver<Eigen::Matrix2cd> ces(B);
      measured = 0.0;
      for (int j = 0; j < 2; ++j) {
        const double ph = std::abs(std::arg(ces.eigenvalues()(j)));
        out.max_phase_mismatch = std::max(out.max_phase_mismatch, std::abs(ph - theta));
        measured = ph;
      }
      // the pair must be conjugate
      const double sum = std::arg(ces.eigenvalues()(0)) + std::arg(ces.eigenvalues()(1));
      out.max_phase_mismatch = std::max(out.max_phase_mismatch, std::abs(sum));
    }
    out.max_phase_mismatch = std::max(out.max_phase_mismatch, std::abs(measured - theta));
    out.expected.push_back(theta);
    out.measured.push_back(measured);
  }
  // full spectrum cross check on small walks: every expected phase must be an eigenphase of W
  if (w.dense.size() > 0 && w.dense.rows() <= 256) {
    Eigen::ComplexEigenSolver<DenseOperator> ces(w.dense);
    std::vector<double> phases;
    for (long i = 0; i < ces.eigenvalues().size(); ++i) phases.push_back(std::abs(std::arg(ces.eigenvalues()(i))));
    for (double th : out.expected) {
      double best = 1e9;
      for (double ph : phases) best = std::min(best, std::abs(ph - th));
      out.max_phase_mismatch = std::max(out.max_phase_mismatch, best);
    }
    out.full_spectrum_checked = true;
  }
  return out;
}

BlockEncoding divide_and_conquer_compose(const std::vector<BlockEncoding>& children, const std::vector<double>& weights) {
  if (children.empty()) throw Error(ErrorCode::InvalidParameter, "no children to compose");
  if (weights.size() != children.size()) throw Error(ErrorCode::InvalidParameter, "one weight per child required");
  for (double x : weights)
    if (!(x > 0)) throw Error(ErrorCode::InvalidParameter, "weights must be positive");
  if (children.size() == 1 && weights[0] == 1.0) return children[0];
  const std::size_t M = children.size();
  BlockEncoding out = children[0];
  out.alpha = 0.0;
  out.t_count = out.rz_count = out.aqft_count = 0.0;
  out.ancilla_qubits = 0;
  out.identity_offset = 0.0;
  out.terms.clear();
  out.dense_prep.reset();
  out.dense_select.reset();
  bool uniform = true;
  const double a0 = weights[0] * children[0].alpha;
  for (std::size_t i = 0; i < M; ++i) {
    const BlockEncoding& c = children[i];
    out.alpha += weights[i] * c.alpha;
    out.t_count += c.t_count;
    out.rz_count += c.rz_count;
    out.aqft_count += c.aqft_count;
    out.ancilla_qubits = std::max(out.ancilla_qubits, c.ancilla_qubits);
    out.dense = out.dense && c.dense;
    out.identity_offset += weights[i] * c.identity_offset;
    if (std::abs(weights[i] * c.alpha - a0) > 1e-12 * std::max(1.0, a0)) uniform = false;
    for (const auto& t : c.terms) {
      SelectTerm s = t;
      s.coeff *= weights[i];
      out.terms.push_back(std::move(s));
    }
  }
  const long sel = ceil_log2(static_cast<double>(M));
  out.ancilla_qubits += sel;
  out.t_count += static_cast<double>(M) * std::max<long>(0, 4 * sel - 4);
  if (!uniform) out.rz_count += static_cast<double>(M - 1);
  out.tally.t_count = out.t_count;
  out.tally.rz_count = out.rz_count;
  out.tally.aqft_count = out.aqft_count;
  out.tally.ancilla_qubits = out.ancilla_qubits;
  out.tally.breakdown = {{"composition_selector_t", static_cast<double>(M) * std::max<long>(0, 4 * sel - 4)}};
  if (out.dense) {
    out.index_qubits = static_cast<int>(ceil_log2(static_cast<double>(out.terms.size())));
    materialize(out);
  }
  return out;
}

std::vector<BlockEncoding> site_children(const BlockEncoding& be) {
  if (!be.dense) throw Error(ErrorCode::MissingDense, "splitting needs the dense term list");
  std::map<long, std::vector<SelectTerm>> by_site;
  for (const auto& t : be.terms) by_site[t.site].push_back(t);
  std::vector<BlockEncoding> out;
  const double n = static_cast<double>(by_site.size());
  for (auto& [site, ts] : by_site) {
    BlockEncoding c = be;
    c.terms = std::move(ts);
    c.alpha = 0.0;
    for (const auto& t : c.terms) c.alpha += t.coeff;
    c.identity_offset = be.identity_offset / n;
    c.t_count = be.t_count / n;
    c.rz_count = be.rz_count / n;
    c.aqft_count = be.aqft_count / n;
    c.index_qubits = static_cast<int>(ceil_log2(static_cast<double>(c.terms.size())));
    c.dense_prep.reset();
    c.dense_select.reset();
    materialize(c);
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace phi4
