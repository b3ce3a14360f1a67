#include "phi4/occ_model.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "phi4/errors.hpp"

namespace phi4 {

namespace {

double rising(int n, int m) {
  // (n+m)!/n!
  double r = 1.0;
  for (int i = 1; i <= m; ++i) r *= n + i;
  return r;
}

PauliSum hop_op(long p, int n, int m, int N, long modes) {
  const int w = N + 1;
  PauliSum s(static_cast<int>(modes * w));
  const int q0 = static_cast<int>(p * w + n), q1 = q0 + m;
  s.add(1.0, {{q0, Pauli::X}, {q1, Pauli::X}});
  s.add(1.0, {{q0, Pauli::Y}, {q1, Pauli::Y}});
  return s;
}

PauliSum diag_op(long p, int n, int N, long modes) {
  const int w = N + 1;
  PauliSum s(static_cast<int>(modes * w));
  s.add_identity(1.0);
  s.add(-1.0, {{static_cast<int>(p * w + n), Pauli::Z}});
  return s;
}

struct Piece {
  bool hop = false;
  int m = 0;  // hop distance
  int n = 0;  // lower level
  double coeff = 0.0;
  PauliSum op;
};

// Pieces of the normal-ordered power :(a + a^dag)^j: on mode p.
std::vector<Piece> pieces(long p, int j, int N, long modes) {
  struct HopTerm {
    int m;
    std::function<double(int)> g;
  };
  std::vector<HopTerm> hops;
  std::function<double(int)> diag;
  switch (j) {
    case 1: hops = {{1, [](int) { return 1.0; }}}; break;
    case 2:
      hops = {{2, [](int) { return 1.0; }}};
      diag = [](int n) { return 2.0 * n; };
      break;
    case 3: hops = {{3, [](int) { return 1.0; }}, {1, [](int n) { return 3.0 * n; }}}; break;
    case 4:
      hops = {{4, [](int) { return 1.0; }}, {2, [](int n) { return 4.0 * n; }}};
      diag = [](int n) { return 6.0 * n * (n - 1); };
      break;
    default: throw Error(ErrorCode::InvalidParameter, "mode multiplicity must be 1..4");
  }
  std::vector<Piece> out;
  for (const auto& h : hops) {
    for (int n = 0; n + h.m <= N; ++n) {
      const double c = 0.5 * std::sqrt(rising(n, h.m)) * h.g(n);
      if (c != 0.0) out.push_back({true, h.m, n, c, hop_op(p, n, h.m, N, modes)});
    }
  }
  if (diag) {
    for (int n = 0; n <= N; ++n) {
      const double c = 0.5 * diag(n);
      if (c != 0.0) out.push_back({false, 0, n, c, diag_op(p, n, N, modes)});
    }
  }
  return out;
}

bool in_s20(int n) {
  const int r = n % 4;
  return r == 1 || r == 2;
}
bool in_s40(int n) {
  const int r = n % 8;
  return r >= 1 && r <= 4;
}
bool even(int n) { return n % 2 == 0; }

struct ModeMult {
  long mode;
  int mult;
};

// Fragment label for one product of pieces, following the commuting sub-grouping rules.
std::string fragment_label(int group, const std::vector<ModeMult>& mm, const std::vector<const Piece*>& pc) {
  switch (group) {
    case 4: {
      const Piece& a = *pc[0];
      if (!a.hop) return "H45";
      if (a.m == 4) return in_s40(a.n) ? "H41" : "H42";
      return in_s20(a.n) ? "H43" : "H44";
    }
    case 1: {
      int cnt = 0;
      for (auto* p : pc) cnt += even(p->n) ? 1 : 0;
      return cnt % 2 == 0 ? "H11" : "H12";
    }
    case 2: {
      std::size_t dbl = 0;
      for (std::size_t i = 0; i < mm.size(); ++i)
        if (mm[i].mult == 2) dbl = i;
      std::vector<int> singles;
      for (std::size_t i = 0; i < mm.size(); ++i)
        if (i != dbl) singles.push_back(pc[i]->n);
      const bool same = even(singles[0]) == even(singles[1]);
      const Piece& a = *pc[dbl];
      if (a.hop) {
        const bool s0 = in_s20(a.n) ? !same : same;
        return s0 ? "H21" : "H22";
      }
      return same ? "H24" : "H23";
    }
    case 3: {
      const Piece& a = *pc[0];
      const Piece& b = *pc[1];
      if (a.hop && b.hop) return in_s20(a.n) != in_s20(b.n) ? "H31" : "H32";
      if (a.hop) return in_s20(a.n) ? "H33" : "H34";
      if (b.hop) return in_s20(b.n) ? "H35" : "H36";
      return "H37";
    }
  }
  throw Error(ErrorCode::InvalidParameter, "unknown group");
}

int classify(const std::vector<ModeMult>& mm) {
  std::vector<int> m;
  for (auto& x : mm) m.push_back(x.mult);
  std::sort(m.begin(), m.end());
  if (m == std::vector<int>{4}) return 4;
  if (m == std::vector<int>{2, 2}) return 3;
  if (m == std::vector<int>{1, 1, 2}) return 2;
  if (m == std::vector<int>{1, 1, 1, 1}) return 1;
  throw Error(ErrorCode::InvalidParameter, "momentum tuple with a triple repeat cannot conserve momentum");
}

std::vector<ModeMult> multiplicities(const std::array<long, 4>& t) {
  std::vector<ModeMult> mm;
  for (long x : t) {
    auto it = std::find_if(mm.begin(), mm.end(), [x](const ModeMult& v) { return v.mode == x; });
    if (it == mm.end())
      mm.push_back({x, 1});
    else
      ++it->mult;
  }
  std::sort(mm.begin(), mm.end(), [](const ModeMult& a, const ModeMult& b) { return a.mode < b.mode; });
  return mm;
}

template <class F>
void for_each_tuple(const LatticeParams& params, F&& f) {
  const long V = params.Omega;
  for (long p1 = 0; p1 < V; ++p1)
    for (long p2 = 0; p2 < V; ++p2)
      for (long q = 0; q < V; ++q) {
        std::array<long, 4> t{p1, p2, mode_add(p1, q, params.P, params.d, +1),
                              mode_add(p2, q, params.P, params.d, -1)};
        f(t);
      }
}

double prefactor_of(const LatticeParams& params, const OccOptions& opt) {
  double pre = params.Lambda / 96.0;
  if (opt.normalization == OccNormalization::per_volume) pre /= static_cast<double>(params.Omega);
  return pre;
}

}  // namespace

const std::vector<std::string>& occ_fragment_names() {
  static const std::vector<std::string> names = {"H11", "H12", "H21", "H22", "H23", "H24", "H31", "H32", "H33",
                                                 "H34", "H35", "H36", "H37", "H41", "H42", "H43", "H44", "H45"};
  return names;
}

std::vector<std::pair<std::string, PauliSum>> OccHamiltonian::fragment_split() const {
  std::vector<std::pair<std::string, PauliSum>> out;
  for (const auto& name : occ_fragment_names()) {
    auto it = fragments.find(name);
    if (it != fragments.end() && !it->second.empty()) out.emplace_back(name, it->second);
  }
  return out;
}

PauliSum ladder_weighted(long p, int m, const std::function<double(int)>& g, int N, long modes) {
  if (m < 1) throw Error(ErrorCode::InvalidParameter, "ladder power must be >= 1");
  if (N < m) throw Error(ErrorCode::CutoffTooSmall, "cutoff N=" + std::to_string(N) + " below ladder power");
  if (p < 0 || p >= modes) throw Error(ErrorCode::OutOfRange, "mode index out of range");
  PauliSum s(static_cast<int>(modes * (N + 1)));
  for (int n = 0; n + m <= N; ++n) {
    const double c = 0.5 * std::sqrt(rising(n, m)) * g(n);
    if (c != 0.0) s += c * hop_op(p, n, m, N, modes);
  }
  return s;
}

PauliSum map_ladder(long p, int m, int r, int N, long modes) {
  if (r < 0) throw Error(ErrorCode::InvalidParameter, "number power must be >= 0");
  return ladder_weighted(p, m, [r](int n) { return std::pow(static_cast<double>(n), r); }, N, modes);
}

PauliSum number_operator(long p, int N, long modes) {
  PauliSum s(static_cast<int>(modes * (N + 1)));
  for (int n = 1; n <= N; ++n) s += (0.5 * n) * diag_op(p, n, N, modes);
  return s;
}

OccHamiltonian build_occ_hamiltonian(const LatticeParams& params, const OccupationCutoffs& cutoffs,
                                     const OccOptions& opt) {
  const int N = cutoffs.N;
  const long V = params.Omega;
  if (cutoffs.mode_count != V) throw Error(ErrorCode::InvalidParameter, "cutoffs built for a different volume");
  const int nq = static_cast<int>(V * (N + 1));
  OccHamiltonian H;
  H.params = params;
  H.cutoffs = cutoffs;
  H.layout = {static_cast<int>(V), N + 1};
  H.prefactor = prefactor_of(params, opt);
  for (PauliSum* s : {&H.h0, &H.h1, &H.h2, &H.h3, &H.h4, &H.total}) *s = PauliSum(nq);

  const Dispersion disp = dispersion_table(params);
  for (long p = 0; p < V; ++p) H.h0 += disp.omega[p] * number_operator(p, N, V);
  H.fragments["H45"] = H.h0;

  if (params.Lambda != 0.0) {
    PauliSum* groups[5] = {nullptr, &H.h1, &H.h2, &H.h3, &H.h4};
    for_each_tuple(params, [&](const std::array<long, 4>& t) {
      auto mm = multiplicities(t);
      const int g = classify(mm);
      double w = 1.0;
      for (long x : t) w *= disp.omega[x];
      const double pre = H.prefactor / std::sqrt(w);
      std::vector<std::vector<Piece>> per_mode;
      for (auto& x : mm) per_mode.push_back(pieces(x.mode, x.mult, N, V));
      // Cartesian product of per-mode pieces
      std::vector<std::size_t> idx(per_mode.size(), 0);
      for (auto& v : per_mode)
        if (v.empty()) return;
      while (true) {
        std::vector<const Piece*> pc;
        double c = pre;
        PauliSum op(nq);
        op.add_identity(1.0);
        for (std::size_t i = 0; i < per_mode.size(); ++i) {
          const Piece& pi = per_mode[i][idx[i]];
          pc.push_back(&pi);
          c *= pi.coeff;
          op = op.tensor(pi.op);
        }
        op *= c;
        *groups[g] += op;
        auto& frag = H.fragments[fragment_label(g, mm, pc)];
        if (frag.n_qubits() == 0) frag = PauliSum(nq);
        frag += op;
        std::size_t k = 0;
        while (k < idx.size() && ++idx[k] == per_mode[k].size()) idx[k++] = 0;
        if (k == idx.size()) break;
      }
    });
  }
  H.total = H.h0 + H.h1 + H.h2 + H.h3 + H.h4;
  for (auto& [name, s] : H.fragments) s.prune(1e-15);
  return H;
}

OccDenseGroups occ_dense_oracle(const LatticeParams& params, const OccupationCutoffs& cutoffs, const OccOptions& opt) {
  const int N = cutoffs.N;
  const int w = N + 1;
  const long V = params.Omega;
  long dim = 1;
  for (long p = 0; p < V; ++p) dim *= w;
  if (dim > (1L << kOracleMaxQubits)) throw Error(ErrorCode::TooManyQubits, "Fock space too large for the oracle");

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(w, w);
  for (int n = 1; n <= N; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  const Eigen::MatrixXd ad = a.transpose();
  auto power = [](const Eigen::MatrixXd& m, int k) {
    Eigen::MatrixXd r = Eigen::MatrixXd::Identity(m.rows(), m.cols());
    for (int i = 0; i < k; ++i) r = r * m;
    return r;
  };
  // Tensor product of per-mode factors; basis digit n_p has weight w^p.
  auto kron = [&](const std::vector<Eigen::MatrixXd>& f) {
    DenseOperator out = DenseOperator::Zero(dim, dim);
    for (long r = 0; r < dim; ++r)
      for (long c = 0; c < dim; ++c) {
        double v = 1.0;
        long rr = r, cc = c;
        for (long p = 0; p < V && v != 0.0; ++p) {
          v *= f[p](rr % w, cc % w);
          rr /= w;
          cc /= w;
        }
        out(r, c) = v;
      }
    return out;
  };

  OccDenseGroups G;
  const Dispersion disp = dispersion_table(params);
  G.h0 = DenseOperator::Zero(dim, dim);
  for (long p = 0; p < V; ++p) {
    std::vector<Eigen::MatrixXd> f(V, Eigen::MatrixXd::Identity(w, w));
    f[p] = disp.omega[p] * ad * a;
    G.h0 += kron(f);
  }
  DenseOperator* groups[5] = {nullptr, &G.h1, &G.h2, &G.h3, &G.h4};
  for (int g = 1; g <= 4; ++g) *groups[g] = DenseOperator::Zero(dim, dim);
  if (params.Lambda == 0.0) return G;

  const double pref = prefactor_of(params, opt);
  for_each_tuple(params, [&](const std::array<long, 4>& t) {
    const int g = classify(multiplicities(t));
    double wprod = 1.0;
    for (long x : t) wprod *= disp.omega[x];
    DenseOperator acc = DenseOperator::Zero(dim, dim);
    // each of the 16 words, normal ordered mode by mode
    for (int word = 0; word < 16; ++word) {
      std::vector<int> ncre(V, 0), nann(V, 0);
      for (int j = 0; j < 4; ++j) ((word >> j) & 1 ? ncre : nann)[t[j]]++;
      std::vector<Eigen::MatrixXd> f(V);
      for (long p = 0; p < V; ++p) f[p] = power(ad, ncre[p]) * power(a, nann[p]);
      acc += kron(f);
    }
    *groups[g] += (pref / std::sqrt(wprod)) * acc;
  });
  return G;
}

OccGateReport gate_counts_occ(const OccupationCutoffs& cutoffs, const LatticeParams& params) {
  const std::int64_t N = cutoffs.N, V = params.Omega;
  if (N < 1 || V < 1) throw Error(ErrorCode::InvalidParameter, "N and |Omega| must be >= 1");
  OccGateReport r;
  const Rational q1(N * N * N * N * V * V * (V - 1));
  r.g1.crz = q1 / Rational(48);
  r.g1.t = q1 / Rational(4);
  r.g1.cnot = Rational(11) * q1 / Rational(16);
  r.g1.h = q1 / Rational(24);
  const Rational q2(N * N * N * V * V);
  r.g2.crz = q2 / Rational(3);
  r.g2.t = Rational(8) * q2 / Rational(3);
  r.g2.cnot = Rational(20) * q2 / Rational(3);
  r.g2.h = Rational(2) * q2 / Rational(3);
  const Rational q3(N * N * V * (V - 1));
  r.g3.crz = Rational(2) * q3;
  r.g3.t = Rational(8) * q3;
  r.g3.cnot = Rational(16) * q3;
  r.g3.h = Rational(3) * q3;
  const Rational q4(N * V);
  r.g4.rz = Rational(3) * q4;
  r.g4.cnot = Rational(4) * q4;
  r.g4.h = Rational(4) * q4;
  r.h0.rz = q4;
  for (const auto* g : {&r.h0, &r.g1, &r.g2, &r.g3, &r.g4}) r.total += *g;
  return r;
}

OccCommBounds alpha_comm_occ_detail(const LatticeParams& params, const OccupationCutoffs& cutoffs, double beta) {
  if (!(params.M > 0.0)) throw Error(ErrorCode::ZeroMass, "omega_min = M must be positive");
  if (beta < 0.0 || beta > 1.0) throw Error(ErrorCode::OutOfRange, "beta must lie in [0,1]");
  OccCommBounds b;
  const double lam = params.Lambda;
  if (lam == 0.0) return b;
  const double N = cutoffs.N, V = static_cast<double>(params.Omega);
  const double wmin = params.M, wmax = dispersion_table(params).omega_max;
  const double L1 = lam / (96.0 * wmin * wmin), L2 = L1 * L1;
  const double B = beta * wmax + lam * beta * (N * beta - 1.0) / (16.0 * wmin * wmin);
  const double s12 = std::sqrt((N + 1) * (N + 2)), s34 = std::sqrt((N + 3) * (N + 4));
  const double n1 = N + 1;

  b.comm[0] = lam * lam * std::pow(n1, 4) / (3.0 * 2048.0 * std::pow(wmin, 4));
  b.comm[1] = L2 * 3.0 * (4 * N * N * n1 * n1 + 8 * N * std::pow(n1, 2.5) * std::sqrt(N + 2));
  b.comm[2] = L2 * (2 * N * N * n1 * (N + 2) + 16 * N * N * N * s12);
  b.comm[3] = L2 * n1 * (N + 2) * ((N + 3) * (N + 4) + 16 * N * s34 + 16 * N * N) +
              lam / (48.0 * wmin * wmin) * s12 * (s34 + 4 * N) * B;
  b.comm[4] = L2 * 16 * N * std::pow(n1, 3) * (s12 + 2 * N);
  b.comm[5] = L2 * 32 * n1 * n1 * (n1 * (N + 2) + 4 * N * s12 + 3 * N * N);
  b.comm[6] = L2 * 32 * std::pow(n1, 2.5) * std::sqrt(N + 2) * (s34 + 4 * N) + L1 * 16 * N * n1 * n1 * B;
  b.comm[7] = L2 * (48 * N * N * std::pow(n1, 1.5) * std::sqrt(N + 2) + 288 * N * N * N * n1);
  b.comm[8] = L2 * 24 * N * std::pow(n1, 1.5) * std::sqrt(N + 2) * (s12 + 2 * N) * (s34 + 4 * N) +
              L1 * 12 * N * N * n1 * (s12 + 2 * N) * B;
  b.comm[9] = L2 * 16 * s12 * (s12 + N) * (s12 + 3 * N) * (s12 + 4 * N) +
              L1 * 4 * N * (2 * n1 * (N + 2) + 8 * N * s12 + 3 * N * N) * B;
  for (double c : b.comm) b.comm_sum += c;
  b.norm_sum = wmax * N * n1 / 2.0 + L1 * V * (n1 * n1 / 2.0 + (N + 2) * (N + 2) + (N + 2) + (N + 4) * (N + 4));
  b.alpha = b.comm_sum * b.norm_sum;
  return b;
}

double alpha_comm_occ(const LatticeParams& params, const OccupationCutoffs& cutoffs, double beta) {
  return alpha_comm_occ_detail(params, cutoffs, beta).alpha;
}

}  // namespace phi4
