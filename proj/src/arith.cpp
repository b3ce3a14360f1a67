#include "phi4/arith.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "phi4/core.hpp"
#include "phi4/errors.hpp"

namespace phi4 {

int CircuitIR::add_qubits(int n, bool is_ancilla) {
  const int first = n_qubits;
  n_qubits += n;
  ancilla.resize(n_qubits, false);
  for (int q = first; q < n_qubits; ++q) ancilla[q] = is_ancilla;
  return first;
}

void CircuitIR::x(int q) { gates.push_back({GateKind::X, {}, {}, q}); }
void CircuitIR::cnot(int c, int t) { gates.push_back({GateKind::CNOT, {c}, {true}, t}); }
void CircuitIR::toffoli(int c1, int c2, int t) { gates.push_back({GateKind::Toffoli, {c1, c2}, {true, true}, t}); }
void CircuitIR::mcx(std::vector<int> controls, std::vector<bool> polarity, int t) {
  if (polarity.empty()) polarity.assign(controls.size(), true);
  gates.push_back({GateKind::MCX, std::move(controls), std::move(polarity), t});
}
void CircuitIR::z(int q) { gates.push_back({GateKind::Z, {}, {}, q}); }
void CircuitIR::cz(int a, int b) { gates.push_back({GateKind::CZ, {a}, {true}, b}); }
void CircuitIR::mcz(std::vector<int> controls, int t) {
  std::vector<bool> pol(controls.size(), true);
  gates.push_back({GateKind::MCZ, std::move(controls), std::move(pol), t});
}
void CircuitIR::and_compute(int c1, int c2, int t) { gates.push_back({GateKind::AndCompute, {c1, c2}, {true, true}, t}); }
void CircuitIR::and_uncompute(int c1, int c2, int t) {
  gates.push_back({GateKind::AndUncompute, {c1, c2}, {true, true}, t});
}

void CircuitIR::append(const CircuitIR& o) {
  if (o.n_qubits > n_qubits) throw Error(ErrorCode::InvalidParameter, "appended circuit is wider");
  gates.insert(gates.end(), o.gates.begin(), o.gates.end());
}

CircuitIR CircuitIR::inverse() const {
  CircuitIR r = *this;
  std::reverse(r.gates.begin(), r.gates.end());
  for (auto& g : r.gates) {
    if (g.kind == GateKind::AndCompute)
      g.kind = GateKind::AndUncompute;
    else if (g.kind == GateKind::AndUncompute)
      g.kind = GateKind::AndCompute;
  }
  return r;
}

std::string CircuitIR::serialize() const {
  static const char* names[] = {"X", "CNOT", "TOFFOLI", "MCX", "Z", "CZ", "MCZ", "AND", "UNAND"};
  std::ostringstream os;
  for (const auto& g : gates) {
    os << names[static_cast<int>(g.kind)] << ' ';
    for (std::size_t i = 0; i < g.controls.size(); ++i) os << g.controls[i] << (g.polarity[i] ? "" : "!") << ',';
    os << g.target << '\n';
  }
  return os.str();
}

ResourceCount tally(const CircuitIR& c) {
  ResourceCount r;
  for (const auto& g : c.gates) {
    const auto nc = static_cast<std::int64_t>(g.controls.size());
    switch (g.kind) {
      case GateKind::X: r.x += 1; break;
      case GateKind::CNOT: r.cnot += 1; break;
      case GateKind::Toffoli:
        r.t += 7;
        r.cnot += 6;
        r.h += 2;
        break;
      case GateKind::MCX:
      case GateKind::MCZ: {
        // AND ladder over the controls, then one CNOT (or CZ) onto the target
        const std::int64_t ands = std::max<std::int64_t>(nc - 1, 0);
        r.t += 4 * ands;
        r.cnot += 6 * ands + (g.kind == GateKind::MCX ? 1 : 0);
        r.cz += ands + (g.kind == GateKind::MCZ ? 1 : 0);
        r.s += ands;
        r.h += 2 * ands;
        r.measurement_depth += ands;
        r.x += 2 * std::count(g.polarity.begin(), g.polarity.end(), false);
        break;
      }
      case GateKind::Z: break;  // Clifford, not tallied
      case GateKind::CZ: r.cz += 1; break;
      case GateKind::AndCompute:
        r.t += 4;
        r.cnot += 6;
        r.h += 1;
        r.s += 1;
        break;
      case GateKind::AndUncompute:
        r.h += 1;
        r.cz += 1;
        r.measurement_depth += 1;
        break;
    }
  }
  r.ancilla = std::count(c.ancilla.begin(), c.ancilla.end(), true);
  return r;
}

SimResult simulate(const CircuitIR& c, std::uint64_t s) {
  SimResult r;
  auto bit = [&](int q) { return (s >> q) & 1u; };
  auto fires = [&](const Gate& g) {
    for (std::size_t i = 0; i < g.controls.size(); ++i)
      if (static_cast<bool>(bit(g.controls[i])) != static_cast<bool>(g.polarity[i])) return false;
    return true;
  };
  for (const auto& g : c.gates) {
    const std::uint64_t tm = std::uint64_t{1} << g.target;
    switch (g.kind) {
      case GateKind::X: s ^= tm; break;
      case GateKind::CNOT:
      case GateKind::Toffoli:
      case GateKind::MCX:
        if (fires(g)) s ^= tm;
        break;
      case GateKind::Z:
        if (bit(g.target)) r.sign = -r.sign;
        break;
      case GateKind::CZ:
      case GateKind::MCZ:
        if (fires(g) && bit(g.target)) r.sign = -r.sign;
        break;
      case GateKind::AndCompute:
        if (bit(g.target)) r.and_violation = true;
        if (fires(g)) s ^= tm;
        break;
      case GateKind::AndUncompute:
        // on basis states the measurement outcome is deterministic and the CZ fix leaves no phase
        if (bit(g.target) != static_cast<std::uint64_t>(fires(g))) r.and_violation = true;
        s &= ~tm;
        break;
    }
  }
  r.state = s;
  return r;
}

std::uint64_t pack(const std::vector<int>& reg, std::uint64_t v) {
  std::uint64_t s = 0;
  for (std::size_t i = 0; i < reg.size(); ++i)
    if ((v >> i) & 1u) s |= std::uint64_t{1} << reg[i];
  return s;
}

std::uint64_t unpack(const std::vector<int>& reg, std::uint64_t s) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < reg.size(); ++i)
    if ((s >> reg[i]) & 1u) v |= std::uint64_t{1} << i;
  return v;
}

namespace {

std::vector<int> range(int first, int n) {
  std::vector<int> r(n);
  for (int i = 0; i < n; ++i) r[i] = first + i;
  return r;
}

void require_width(int n, int lo) {
  if (n < lo) throw Error(ErrorCode::InvalidParameter, "register width too small");
  if (n > 20) throw Error(ErrorCode::OutOfRange, "register width above 20");
}

// Carry ripple: c[i+1] = maj(a_i, b_i, c_i), leaving a_i^c_i, b_i^c_i. c has n entries (c_1..c_n).
void carry_compute(CircuitIR& ir, const std::vector<int>& a, const std::vector<int>& b, const std::vector<int>& c) {
  const int n = static_cast<int>(a.size());
  ir.and_compute(a[0], b[0], c[0]);
  for (int i = 1; i < n; ++i) {
    ir.cnot(c[i - 1], a[i]);
    ir.cnot(c[i - 1], b[i]);
    ir.and_compute(a[i], b[i], c[i]);
    ir.cnot(c[i - 1], c[i]);
  }
}

// Inverse of carry_compute that also writes a+b+... into b.
void carry_uncompute_sum(CircuitIR& ir, const std::vector<int>& a, const std::vector<int>& b,
                         const std::vector<int>& c) {
  const int n = static_cast<int>(a.size());
  for (int i = n - 1; i >= 1; --i) {
    ir.cnot(c[i - 1], c[i]);
    ir.and_uncompute(a[i], b[i], c[i]);
    ir.cnot(c[i - 1], a[i]);
    ir.cnot(a[i], b[i]);
  }
  ir.and_uncompute(a[0], b[0], c[0]);
  ir.cnot(a[0], b[0]);
}

ArithCircuit make_two_register(int n) {
  ArithCircuit ac;
  ac.x = range(ac.ir.add_qubits(n, false), n);
  ac.y = range(ac.ir.add_qubits(n, false), n);
  return ac;
}

}  // namespace

ResourceCount adder_counts(int n) {
  ResourceCount r;
  r.t = 4 * n;
  r.ancilla = n;
  r.measurement_depth = n;
  r.cnot = 12 * n - 3;
  r.cz = n;
  r.s = n;
  r.h = 2 * n;
  return r;
}

ResourceCount subtractor_counts(int n) {
  auto r = adder_counts(n);
  r.x = 2 * n;
  return r;
}

ResourceCount incrementer_counts(int n) {
  ResourceCount r;
  r.t = 4 * (n - 1);
  r.ancilla = n - 1;
  r.measurement_depth = n - 1;
  r.cnot = 7 * (n - 1);
  r.cz = n - 1;
  r.s = n;
  r.h = 2 * (n - 1);
  r.x = 1;
  return r;
}

ResourceCount comparator_counts(int n, CmpVariant v) {
  // CMP' stops after the carries; CMP also uncomputes them by measurement, which costs no T
  ResourceCount r;
  r.t = 4 * n;
  r.cnot = 6 * n + 3 * (n - 1) + 1;
  r.s = n;
  r.h = n;
  r.x = n;
  r.ancilla = n + 1;
  if (v == CmpVariant::CMP) {
    r.cnot += 3 * (n - 1);
    r.cz = n;
    r.h = 2 * n;
    r.x = 2 * n;
    r.measurement_depth = n;
  }
  return r;
}

ResourceCount multiplier_counts(int n) {
  ResourceCount r;
  r.t = 8 * n * n - 4;
  r.ancilla = (n + 1) * (2 * n - 1) + 1;
  r.measurement_depth = 2 * n * n - 1;
  r.cnot = 12 * n * n - 6;
  r.cz = 2 * n * n - 1;
  r.s = 2 * n * n - 1;
  r.h = 4 * n * n - 2;
  return r;
}

ArithCircuit adder(int n) {
  require_width(n, 1);
  auto ac = make_two_register(n);
  ac.scratch = range(ac.ir.add_qubits(n, true), n);
  // the x register receives the sum, so it plays the role of b in the ripple
  carry_compute(ac.ir, ac.y, ac.x, ac.scratch);
  carry_uncompute_sum(ac.ir, ac.y, ac.x, ac.scratch);
  ac.counts = adder_counts(n);
  return ac;
}

ArithCircuit subtractor(int n) {
  require_width(n, 1);
  auto ac = adder(n);
  // x - y = ~(~x + y)
  CircuitIR ir;
  ir.n_qubits = ac.ir.n_qubits;
  ir.ancilla = ac.ir.ancilla;
  for (int q : ac.x) ir.x(q);
  ir.append(ac.ir);
  for (int q : ac.x) ir.x(q);
  ac.ir = std::move(ir);
  ac.counts = subtractor_counts(n);
  return ac;
}

ArithCircuit incrementer(int n) {
  require_width(n, 2);
  ArithCircuit ac;
  auto& ir = ac.ir;
  ac.x = range(ir.add_qubits(n, false), n);
  // carries c_2..c_{n-1} are scratch, c_n is the kept carry-out
  if (n > 2) ac.scratch = range(ir.add_qubits(n - 2, true), n - 2);
  ac.out = {ir.add_qubits(1, true)};
  auto carry = [&](int i) { return i == n ? ac.out[0] : ac.scratch[i - 2]; };
  const auto& a = ac.x;
  ir.and_compute(a[0], a[1], carry(2));
  for (int i = 2; i < n; ++i) ir.and_compute(carry(i), a[i], carry(i + 1));
  for (int i = n - 1; i >= 2; --i) {
    ir.cnot(carry(i), a[i]);
    if (i >= 3) ir.and_uncompute(carry(i - 1), a[i - 1], carry(i));
  }
  if (n > 2) ir.and_uncompute(a[0], a[1], carry(2));
  ir.cnot(a[0], a[1]);
  ir.x(a[0]);
  ac.counts = incrementer_counts(n);
  return ac;
}

ArithCircuit comparator(int n, CmpVariant v) {
  require_width(n, 1);
  auto ac = make_two_register(n);
  auto& ir = ac.ir;
  ac.scratch = range(ir.add_qubits(n, true), n);
  ac.out = {ir.add_qubits(1, true)};
  // carry out of ~j + i is set iff j < i
  CircuitIR fwd;
  fwd.n_qubits = ir.n_qubits;
  fwd.ancilla = ir.ancilla;
  for (int q : ac.y) fwd.x(q);
  carry_compute(fwd, ac.x, ac.y, ac.scratch);
  ir.append(fwd);
  ir.cnot(ac.scratch[n - 1], ac.out[0]);
  if (v == CmpVariant::CMP) ir.append(fwd.inverse());
  ac.counts = comparator_counts(n, v);
  return ac;
}

CircuitIR comparator_phase_oracle(int n) {
  auto cmp = comparator(n, CmpVariant::CMP_prime);
  CircuitIR ir = cmp.ir;
  ir.z(cmp.out[0]);
  ir.append(cmp.ir.inverse());
  return ir;
}

ArithCircuit multiplier(int n) {
  require_width(n, 1);
  auto ac = make_two_register(n);
  auto& ir = ac.ir;
  ac.out = range(ir.add_qubits(2 * n, true), 2 * n);
  std::vector<std::vector<int>> rows(n);
  for (int r = 1; r < n; ++r) rows[r] = range(ir.add_qubits(n, true), n);
  const int pad = n > 1 ? ir.add_qubits(1, true) : -1;  // zero-extension bit of each row
  if (n > 1) ac.scratch = range(ir.add_qubits(n + 1, true), n + 1);
  for (int i = 0; i < n; ++i) ir.and_compute(ac.x[i], ac.y[0], ac.out[i]);
  for (int r = 1; r < n; ++r)
    for (int i = 0; i < n; ++i) ir.and_compute(ac.x[i], ac.y[r], rows[r][i]);
  // shift-and-add: the partial sum is below 2^(n+r), so an (n+1)-bit addition on bits r..r+n is exact
  for (int r = 1; r < n; ++r) {
    std::vector<int> a = rows[r];
    a.push_back(pad);
    std::vector<int> b(ac.out.begin() + r, ac.out.begin() + r + n + 1);
    carry_compute(ir, a, b, ac.scratch);
    carry_uncompute_sum(ir, a, b, ac.scratch);
  }
  for (int r = n - 1; r >= 1; --r)
    for (int i = n - 1; i >= 0; --i) ir.and_uncompute(ac.x[i], ac.y[r], rows[r][i]);
  ac.counts = multiplier_counts(n);
  return ac;
}

ResourceCount grouped_mcx_cost(std::int64_t M, const std::vector<double>& r) {
  if (M < 2 || !is_power_of_two(M)) throw Error(ErrorCode::InvalidPartition, "M must be a power of two >= 2");
  if (r.empty()) throw Error(ErrorCode::InvalidPartition, "empty partition");
  const double logM = std::log2(static_cast<double>(M));
  double inv = 0.0, t = 0.0;
  for (double ri : r) {
    if (!(ri >= 1.0)) throw Error(ErrorCode::InvalidPartition, "group fraction must be >= 1");
    inv += 1.0 / ri;
    const double bits = logM / ri;
    if (std::abs(bits - std::round(bits)) > 1e-9) throw Error(ErrorCode::InvalidPartition, "log2(M)/r_i not integral");
    t += std::pow(2.0, std::round(bits)) * (4.0 * std::round(bits) - 4.0);
  }
  if (std::abs(inv - 1.0) > 1e-9) throw Error(ErrorCode::InvalidPartition, "sum of 1/r_i must equal 1");
  t += static_cast<double>(M) * (4.0 * static_cast<double>(r.size()) - 4.0);
  ResourceCount out;
  out.t = std::llround(t);
  return out;
}

ResourceCount unary_iteration_cost(std::int64_t L) {
  if (L < 1) throw Error(ErrorCode::InvalidParameter, "L must be >= 1");
  ResourceCount r;
  r.t = 4 * L - 4;
  return r;
}

}  // namespace phi4
