#include "quinpi/scalar_advection.hpp"

#include <cmath>

namespace quinpi {

bool ScalarAdvection::admissible(const double* u) const { return std::isfinite(u[0]); }

}  // namespace quinpi
