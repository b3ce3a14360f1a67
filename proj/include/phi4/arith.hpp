#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "phi4/resources.hpp"

namespace phi4 {

enum class GateKind { X, CNOT, Toffoli, MCX, Z, CZ, MCZ, AndCompute, AndUncompute };

struct Gate {
  GateKind kind = GateKind::X;
  std::vector<int> controls;
  std::vector<bool> polarity;  // per control, false = fires on |0>
  int target = 0;
};

/// Reversible circuit over computational basis states. Bit 0 is least significant everywhere.
struct CircuitIR {
  int n_qubits = 0;
  std::vector<Gate> gates;
  std::vector<bool> ancilla;  // per qubit, starts in |0>

  int add_qubits(int n, bool is_ancilla);
  void x(int q);
  void cnot(int c, int t);
  void toffoli(int c1, int c2, int t);
  void mcx(std::vector<int> controls, std::vector<bool> polarity, int t);
  void z(int q);
  void cz(int a, int b);
  void mcz(std::vector<int> controls, int t);
  void and_compute(int c1, int c2, int t);
  void and_uncompute(int c1, int c2, int t);
  void append(const CircuitIR& other);  // same qubit layout
  CircuitIR inverse() const;

  std::string serialize() const;
};

// Per-gate tally. A logical AND costs 4 T gates to compute and none to uncompute.
ResourceCount tally(const CircuitIR& c);

struct SimResult {
  std::uint64_t state = 0;
  int sign = 1;
  bool and_violation = false;  // AND target not clean or uncompute mismatch
};

SimResult simulate(const CircuitIR& c, std::uint64_t input);

/// Register layout shared by the two-operand primitives.
struct ArithCircuit {
  CircuitIR ir;
  ResourceCount counts;  // closed-form accounting
  std::vector<int> x, y, out, scratch;
};

std::uint64_t pack(const std::vector<int>& reg, std::uint64_t value);
std::uint64_t unpack(const std::vector<int>& reg, std::uint64_t state);

// |x>|y>|0> -> |x+y mod 2^n>|y>|0>
ArithCircuit adder(int n);
// |x>|y>|0> -> |x-y mod 2^n>|y>|0>
ArithCircuit subtractor(int n);
// |x>|0> -> |x+1 mod 2^n>, carry-out kept in out[0]
ArithCircuit incrementer(int n);
enum class CmpVariant { CMP, CMP_prime };
// x holds i, y holds j; CMP writes [j < i] into out[0]. CMP_prime leaves the carry scratch
// dirty, so it is only meaningful as CMP'^dag Z CMP'.
ArithCircuit comparator(int n, CmpVariant v);
// CMP'^dag Z_out CMP': phase (2*Theta(j-i) - 1), Theta(0) = 1
CircuitIR comparator_phase_oracle(int n);
// |x>|y>|0> -> |x>|y>|x*y> on a 2n-bit product register
ArithCircuit multiplier(int n);

ResourceCount adder_counts(int n);
ResourceCount subtractor_counts(int n);
ResourceCount incrementer_counts(int n);
ResourceCount comparator_counts(int n, CmpVariant v);
ResourceCount multiplier_counts(int n);

// Multi-controlled X over M targets with the control register split into groups of
// log2(M)/r_i bits.
ResourceCount grouped_mcx_cost(std::int64_t M, const std::vector<double>& group_fractions);
ResourceCount unary_iteration_cost(std::int64_t L);

}  // namespace phi4
