#pragma once

#include <cmath>

#include "phi4/core.hpp"

namespace phi4::test {

inline LatticeParams lattice(double lambda, int P, double m = 1.0, int d = 1, bool amp = false) {
  return build_params({{"m", m}, {"lambda", lambda}, {"a", 1.0}, {"d", static_cast<double>(d)}, {"P", static_cast<double>(P)}},
                      amp);
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace phi4::test
