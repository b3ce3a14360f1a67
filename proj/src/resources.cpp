#include "phi4/resources.hpp"

#include <sstream>

namespace phi4 {

std::string ResourceCount::str() const {
  std::ostringstream os;
  os << "T=" << t << " CNOT=" << cnot << " CZ=" << cz << " S=" << s << " H=" << h << " X=" << x << " Rz=" << rz
     << " ancilla=" << ancilla << " depth=" << measurement_depth;
  return os.str();
}

}  // namespace phi4
