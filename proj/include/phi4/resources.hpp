#pragma once

#include <cstdint>
#include <string>

namespace phi4 {

/// Exact per-gate tallies. Additive under concatenation.
struct ResourceCount {
  std::int64_t t = 0, cnot = 0, cz = 0, s = 0, h = 0, x = 0, rz = 0;
  std::int64_t ancilla = 0;
  std::int64_t measurement_depth = 0;

  ResourceCount& operator+=(const ResourceCount& o) {
    t += o.t;
    cnot += o.cnot;
    cz += o.cz;
    s += o.s;
    h += o.h;
    x += o.x;
    rz += o.rz;
    ancilla += o.ancilla;
    measurement_depth += o.measurement_depth;
    return *this;
  }
  friend ResourceCount operator+(ResourceCount a, const ResourceCount& b) { return a += b; }
  friend bool operator==(const ResourceCount&, const ResourceCount&) = default;
  std::string str() const;
};

}  // namespace phi4
