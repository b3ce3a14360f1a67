#include "phi4/pauli.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "phi4/errors.hpp"

namespace phi4 {

namespace {

char pauli_char(Pauli p) { return p == Pauli::X ? 'X' : p == Pauli::Y ? 'Y' : 'Z'; }

void check_cap(int n) {
  if (n > kOracleMaxQubits)
    throw Error(ErrorCode::TooManyQubits,
                std::to_string(n) + " qubits exceeds the dense oracle cap of " + std::to_string(kOracleMaxQubits));
}

}  // namespace

void PauliSum::set_n_qubits(int n) {
  for (const auto& [s, c] : terms_)
    if (!s.empty() && s.back().first >= n) throw Error(ErrorCode::OutOfRange, "qubit index beyond register");
  n_qubits_ = n;
}

void PauliSum::add(double coeff, PauliString f) {
  std::sort(f.begin(), f.end());
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i].first < 0 || f[i].first >= n_qubits_) throw Error(ErrorCode::OutOfRange, "qubit index out of range");
    if (i && f[i].first == f[i - 1].first) throw Error(ErrorCode::InvalidParameter, "repeated qubit in Pauli string");
  }
  if (coeff == 0.0) return;
  auto [it, inserted] = terms_.emplace(std::move(f), coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0.0) terms_.erase(it);
  }
}

PauliSum& PauliSum::operator+=(const PauliSum& o) {
  if (o.n_qubits_ > n_qubits_) n_qubits_ = o.n_qubits_;
  for (const auto& [s, c] : o.terms_) add(c, s);
  return *this;
}

PauliSum& PauliSum::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [k, c] : terms_) c *= s;
  return *this;
}

PauliSum PauliSum::tensor(const PauliSum& o) const {
  PauliSum out(std::max(n_qubits_, o.n_qubits_));
  for (const auto& [s1, c1] : terms_) {
    for (const auto& [s2, c2] : o.terms_) {
      PauliString s = s1;
      s.insert(s.end(), s2.begin(), s2.end());
      out.add(c1 * c2, std::move(s));
    }
  }
  return out;
}

void PauliSum::prune(double tol) {
  std::erase_if(terms_, [tol](const auto& kv) { return std::abs(kv.second) <= tol; });
}

std::vector<PauliTerm> PauliSum::terms() const {
  std::vector<PauliTerm> out;
  out.reserve(terms_.size());
  for (const auto& [s, c] : terms_) out.push_back({c, s});
  return out;
}

double PauliSum::l1() const {
  double s = 0.0;
  for (const auto& [k, c] : terms_) s += std::abs(c);
  return s;
}

double PauliSum::identity_coeff() const {
  auto it = terms_.find({});
  return it == terms_.end() ? 0.0 : it->second;
}

std::string PauliSum::serialize() const {
  std::ostringstream os;
  os.precision(17);
  for (const auto& [s, c] : terms_) {
    os << c;
    for (const auto& [q, p] : s) os << ' ' << q << ':' << pauli_char(p);
    os << '\n';
  }
  return os.str();
}

PauliSum PauliSum::parse(const std::string& text, int n_qubits) {
  PauliSum out(n_qubits);
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    double c;
    if (!(ls >> c)) throw Error(ErrorCode::ConfigParse, "bad coefficient in '" + line + "'");
    PauliString s;
    std::string tok;
    while (ls >> tok) {
      auto colon = tok.find(':');
      if (colon == std::string::npos || colon + 2 != tok.size())
        throw Error(ErrorCode::ConfigParse, "bad factor '" + tok + "'");
      int q = std::stoi(tok.substr(0, colon));
      char p = tok[colon + 1];
      Pauli pp = p == 'X' ? Pauli::X : p == 'Y' ? Pauli::Y : p == 'Z' ? Pauli::Z : throw Error(ErrorCode::ConfigParse, "bad Pauli '" + tok + "'");
      s.emplace_back(q, pp);
    }
    out.add(c, std::move(s));
  }
  return out;
}

std::pair<std::uint64_t, cplx> apply_string(const PauliString& s, std::uint64_t state) {
  cplx phase{1.0, 0.0};
  for (const auto& [q, p] : s) {
    const std::uint64_t bit = (state >> q) & 1u;
    switch (p) {
      case Pauli::X: state ^= (std::uint64_t{1} << q); break;
      case Pauli::Y:
        // Y|0> = i|1>, Y|1> = -i|0>
        phase *= bit ? cplx{0.0, -1.0} : cplx{0.0, 1.0};
        state ^= (std::uint64_t{1} << q);
        break;
      case Pauli::Z:
        if (bit) phase = -phase;
        break;
    }
  }
  return {state, phase};
}

DenseOperator to_dense(const PauliSum& sum) {
  check_cap(sum.n_qubits());
  const std::uint64_t dim = std::uint64_t{1} << sum.n_qubits();
  DenseOperator m = DenseOperator::Zero(dim, dim);
  for (const auto& [s, c] : sum.raw()) {
    for (std::uint64_t col = 0; col < dim; ++col) {
      auto [row, ph] = apply_string(s, col);
      m(row, col) += c * ph;
    }
  }
  return m;
}

DenseOperator to_dense_subspace(const PauliSum& sum, const std::vector<std::uint64_t>& basis) {
  std::unordered_map<std::uint64_t, Eigen::Index> pos;
  for (std::size_t i = 0; i < basis.size(); ++i) pos[basis[i]] = static_cast<Eigen::Index>(i);
  const auto dim = static_cast<Eigen::Index>(basis.size());
  DenseOperator m = DenseOperator::Zero(dim, dim);
  for (const auto& [s, c] : sum.raw()) {
    for (Eigen::Index col = 0; col < dim; ++col) {
      auto [row, ph] = apply_string(s, basis[col]);
      auto it = pos.find(row);
      if (it != pos.end()) m(it->second, col) += c * ph;
    }
  }
  return m;
}

std::vector<std::uint64_t> UnaryLayout::basis() const {
  std::vector<std::uint64_t> out;
  std::size_t count = 1;
  for (int p = 0; p < modes; ++p) count *= static_cast<std::size_t>(width);
  out.reserve(count);
  for (std::size_t idx = 0; idx < count; ++idx) {
    std::uint64_t s = 0;
    std::size_t r = idx;
    for (int p = 0; p < modes; ++p) {
      const int n = static_cast<int>(r % width);
      r /= width;
      s |= std::uint64_t{1} << (p * width + n);
    }
    out.push_back(s);
  }
  return out;
}

bool is_hermitian(const DenseOperator& m, double tol) {
  return m.rows() == m.cols() && (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

double spectral_norm(const DenseOperator& m) {
  if (m.size() == 0) return 0.0;
  if (is_hermitian(m, 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff()))) {
    Eigen::SelfAdjointEigenSolver<DenseOperator> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
  }
  Eigen::JacobiSVD<DenseOperator> svd(m);
  return svd.singularValues()(0);
}

namespace {

DenseOperator realize(const PauliSum& s, Subspace sub, const std::optional<UnaryLayout>& layout) {
  if (sub == Subspace::full) return to_dense(s);
  if (!layout) throw Error(ErrorCode::InvalidParameter, "unary subspace needs a layout");
  if (layout->n_qubits() > 63) throw Error(ErrorCode::TooManyQubits, "unary layout wider than 63 qubits");
  auto b = layout->basis();
  if (b.size() > (std::size_t{1} << kOracleMaxQubits))
    throw Error(ErrorCode::TooManyQubits, "unary subspace exceeds the dense oracle cap");
  return to_dense_subspace(s, b);
}

}  // namespace

double spectral_norm(const PauliSum& sum, Subspace sub, std::optional<UnaryLayout> layout) {
  return spectral_norm(realize(sum, sub, layout));
}

double commutator_norm(const PauliSum& a, const PauliSum& b, Subspace sub, std::optional<UnaryLayout> layout) {
  if (a.n_qubits() != b.n_qubits()) throw Error(ErrorCode::InvalidParameter, "operands act on different registers");
  DenseOperator A = realize(a, sub, layout);
  DenseOperator B = realize(b, sub, layout);
  return spectral_norm(DenseOperator(A * B - B * A));
}

}  // namespace phi4
