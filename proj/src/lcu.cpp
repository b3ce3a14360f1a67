#include "phi4/lcu.hpp"

#include <bit>
#include <cmath>
#include "json.hpp"

#include "phi4/errors.hpp"

namespace phi4 {

namespace {

std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

void require_pow2(int k) {
  if (k < 2 || !is_power_of_two(k)) throw Error(ErrorCode::NonPowerOfTwoCutoff, "k must be a power of two >= 2");
}

void require_power(int power, std::initializer_list<int> allowed) {
  for (int a : allowed)
    if (a == power) return;
  throw Error(ErrorCode::InvalidParameter, "unsupported field power " + std::to_string(power));
}

using ZPoly = std::map<std::uint32_t, std::int64_t>;

// product of two Z polynomials sharing denominator 2^s each
ZPoly zmul(const ZPoly& a, const ZPoly& b) {
  ZPoly out;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) out[ma ^ mb] += ca * cb;
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

void finish(LcuDecomposition& d) {
  double s = 0.0;
  for (const auto& t : d.terms) s += std::abs(static_cast<double>(t.num));
  d.l1 = s / static_cast<double>(d.denom);
  d.target_dim = 2L * d.k;
}

}  // namespace

const char* family_name(LcuFamily f) {
  switch (f) {
    case LcuFamily::equal_weight: return "equal_weight";
    case LcuFamily::z_binary: return "z_binary";
    case LcuFamily::signature: return "signature";
  }
  return "?";
}

std::vector<int> UnitaryDescriptor::diagonal() const {
  const int D = 2 * k;
  std::vector<int> d(D, 1);
  switch (kind) {
    case Kind::identity: break;
    case Kind::signature_threshold: {
      const std::int64_t n_max = ipow(k, power);
      for (int b = 0; b < D; ++b) {
        const std::int64_t nj = ipow(b - k + 1, power);
        d[b] = (n_max + nj - threshold - 1 >= 0) ? 1 : -1;
      }
      break;
    }
    case Kind::pauli_z_product:
      for (int b = 0; b < D; ++b) d[b] = (std::popcount(static_cast<std::uint32_t>(b) & z_mask) & 1) ? -1 : 1;
      break;
    case Kind::signature_bits:
      for (int b = 0; b < D; ++b) {
        const std::int64_t v = ipow(b - k + 1, power);
        d[b] = ((v >> (bit - 1)) & 1) ? -1 : 1;
      }
      break;
  }
  return d;
}

std::string UnitaryDescriptor::payload() const {
  switch (kind) {
    case Kind::identity: return "I";
    case Kind::signature_threshold: return "theta:" + std::to_string(threshold) + ":p" + std::to_string(power);
    case Kind::pauli_z_product: {
      std::string s = "Z";
      for (int q = 0; q < 32; ++q)
        if ((z_mask >> q) & 1u) s += ":" + std::to_string(q);
      return s;
    }
    case Kind::signature_bits: return "bit:" + std::to_string(bit) + ":p" + std::to_string(power);
  }
  return "?";
}

std::size_t LcuDecomposition::non_identity_count() const {
  std::size_t n = 0;
  for (const auto& t : terms) n += t.unitary.kind != UnitaryDescriptor::Kind::identity;
  return n;
}

std::vector<std::int64_t> LcuDecomposition::reconstruct_scaled() const {
  std::vector<std::int64_t> acc(2 * k, 0);
  for (const auto& t : terms) {
    const auto d = t.unitary.diagonal();
    for (int b = 0; b < 2 * k; ++b) acc[b] += t.num * d[b];
  }
  return acc;
}

std::string LcuDecomposition::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  const char* kinds[] = {"identity", "signature_threshold", "pauli_z_product", "signature_bits"};
  for (std::size_t i = 0; i < terms.size(); ++i)
    arr.push_back({{"coeff", coeff(i)}, {"kind", kinds[static_cast<int>(terms[i].unitary.kind)]},
                   {"payload", terms[i].unitary.payload()}});
  return arr.dump();
}

std::vector<std::int64_t> diagonal_target(int k, int power) {
  std::vector<std::int64_t> t(2 * k);
  for (int b = 0; b < 2 * k; ++b) t[b] = ipow(b - k + 1, power);
  return t;
}

LcuDecomposition lcu_equal_weight(int k, int power) {
  if (k < 2) throw Error(ErrorCode::InvalidParameter, "k must be >= 2");
  require_power(power, {1, 2, 4});
  LcuDecomposition d;
  d.family = LcuFamily::equal_weight;
  d.k = k;
  d.power = power;
  d.denom = 2;
  const std::int64_t L = 2 * ipow(k, power);
  d.terms.reserve(static_cast<std::size_t>(L));
  for (std::int64_t i = 0; i < L; ++i) {
    UnitaryDescriptor u;
    u.kind = UnitaryDescriptor::Kind::signature_threshold;
    u.k = k;
    u.power = power;
    u.threshold = i;
    d.terms.push_back({1, u});
  }
  finish(d);
  return d;
}

LcuDecomposition lcu_z_binary(int k, int power) {
  require_pow2(k);
  require_power(power, {1, 2, 4});
  const int m = ilog2(2L * k);
  // Phi/delta = 1/2 I - 1/2 sum_j 2^j Z_j on this grid (row b = value + k - 1)
  ZPoly phi{{0u, 1}};
  for (int j = 0; j < m; ++j) phi[1u << j] = -(std::int64_t{1} << j);
  ZPoly poly = phi;
  std::int64_t denom = 2;
  if (power >= 2) {
    poly = zmul(phi, phi);
    denom = 4;
  }
  if (power == 4) {
    poly = zmul(poly, poly);
    denom = 16;
  }
  LcuDecomposition d;
  d.family = LcuFamily::z_binary;
  d.k = k;
  d.power = power;
  d.denom = denom;
  for (const auto& [mask, c] : poly) {
    UnitaryDescriptor u;
    u.kind = mask == 0 ? UnitaryDescriptor::Kind::identity : UnitaryDescriptor::Kind::pauli_z_product;
    u.k = k;
    u.z_mask = mask;
    d.terms.push_back({c, u});
  }
  finish(d);
  return d;
}

LcuDecomposition lcu_signature(int k, int power) {
  require_pow2(k);
  require_power(power, {2, 4});
  const auto target = diagonal_target(k, power);
  const int bits = census_bits(power, k - 1);
  LcuDecomposition d;
  d.family = LcuFamily::signature;
  d.k = k;
  d.power = power;
  d.denom = 2;
  // t = sum_l 2^(l-1) b_l = sum_l 2^(l-2) (I - D_l), D_l = diag((-1)^b_l)
  std::int64_t id = 0;
  std::vector<LcuTerm> planes;
  for (int l = 1; l <= bits; ++l) {
    bool any = false;
    for (auto v : target) any = any || ((v >> (l - 1)) & 1);
    if (!any) continue;  // all-zero plane folds into the identity
    UnitaryDescriptor u;
    u.kind = UnitaryDescriptor::Kind::signature_bits;
    u.k = k;
    u.power = power;
    u.bit = l;
    id += std::int64_t{1} << (l - 1);
    planes.push_back({-(std::int64_t{1} << (l - 1)), u});
  }
  UnitaryDescriptor I;
  I.k = k;
  d.terms.push_back({id, I});
  d.terms.insert(d.terms.end(), planes.begin(), planes.end());
  finish(d);
  return d;
}

std::map<std::uint32_t, std::int64_t> walsh_coefficients(const std::vector<std::int64_t>& diag) {
  const std::size_t D = diag.size();
  std::vector<std::int64_t> a = diag;
  for (std::size_t h = 1; h < D; h <<= 1)
    for (std::size_t i = 0; i < D; i += 2 * h)
      for (std::size_t j = i; j < i + h; ++j) {
        const auto x = a[j], y = a[j + h];
        a[j] = x + y;
        a[j + h] = x - y;
      }
  std::map<std::uint32_t, std::int64_t> out;
  for (std::size_t s = 0; s < D; ++s)
    if (a[s] != 0) out[static_cast<std::uint32_t>(s)] = a[s];
  return out;
}

int census_bits(int power, std::int64_t n_max) {
  const auto top = static_cast<std::uint64_t>(ipow(n_max + 1, power));
  return static_cast<int>(std::bit_width(top));
}

std::vector<std::int64_t> bit_pattern_census(int power, std::int64_t n_max, int bit) {
  require_power(power, {2, 4});
  if (n_max < 0 || n_max > (std::int64_t{1} << 20)) throw Error(ErrorCode::OutOfRange, "n_max must lie in [0, 2^20]");
  if (bit < 1 || bit > 63) throw Error(ErrorCode::OutOfRange, "bit index must lie in [1,63]");
  std::vector<std::int64_t> out;
  for (std::int64_t n = 1; n <= n_max + 1; ++n) {
    unsigned __int128 v = 1;
    for (int i = 0; i < power; ++i) v *= static_cast<unsigned __int128>(n);
    if ((v >> (bit - 1)) & 1) out.push_back(n);
  }
  return out;
}

bool bin_intg_holds(std::uint64_t n, int bit) {
  const bool b = (n >> (bit - 1)) & 1u;
  const std::uint64_t r = n % (std::uint64_t{1} << bit);
  return b == (r >= (std::uint64_t{1} << (bit - 1)));
}

bool in_residue_set(int power, std::uint64_t r, int bit) {
  // r^power mod 2^bit >= 2^(bit-1), computed without overflow
  const unsigned __int128 mod = static_cast<unsigned __int128>(1) << bit;
  unsigned __int128 acc = 1, base = r % mod;
  for (int i = 0; i < power; ++i) acc = (acc * base) % mod;
  return r >= 1 && acc >= (mod >> 1);
}

bool bin_pattern_iff(int power, std::uint64_t n, int bit) {
  unsigned __int128 v = 1;
  for (int i = 0; i < power; ++i) v *= n;
  const bool b = (v >> (bit - 1)) & 1;
  if (bit == 1) return b == (n % 2 == 1);
  const int zero_upto = power == 2 ? 2 : 4;
  if (bit <= zero_upto) return !b;
  const int shift = power == 2 ? bit - 1 : bit - 2;
  const std::uint64_t r = n % (std::uint64_t{1} << shift);
  return b == in_residue_set(power, r, bit);
}

bool reflection_symmetric(int power, int bit) {
  const int shift = power == 2 ? bit - 1 : bit - 2;
  const std::uint64_t span = std::uint64_t{1} << shift;
  for (std::uint64_t j = 1; j < span; ++j)
    if (in_residue_set(power, j, bit) != in_residue_set(power, span - j, bit)) return false;
  return true;
}

double l1_norm_hamp(const LatticeParams& p, const AmplitudeCutoffs& c, L1Variant v) {
  const double k = c.k, D2 = c.delta_phi * c.delta_phi, D4 = D2 * D2;
  const double V = static_cast<double>(p.Omega), d = p.d, M2 = p.M * p.M, L = p.Lambda;
  switch (v) {
    case L1Variant::equal_weight: return V * (k * k * k * k * D4 * L / 24.0 + k * k * D2 * (M2 + 3 * d + 1.5));
    case L1Variant::z_binary_decomposition:
      return V * (L * D4 * std::pow(k, 4) / 27.0 + k * k * ((M2 + 7 * d + 1) / 3.0 * D2 - 0.048611 * L * D4) +
                  k * (-3 * d * D2 + 0.03125 * L * D4) + D2 * (-M2 + 8 * d - 4) / 6.0 - 0.0081019 * L * D4);
    case L1Variant::signature_decomposition:
      return V / 4.0 * (k * k * D2 * (2 + M2 + d) + L / 12.0 * std::pow(k, 4) * D4) +
             0.75 * static_cast<double>(p.E_D) * D2 * k * k;
  }
  return 0.0;
}

}  // namespace phi4
