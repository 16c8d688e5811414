#include "gyrosim/spin_system.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gyrosim {

SpinSystem::SpinSystem(int two_ell) : two_ell_(two_ell) {
  if (two_ell < 1) {
    throw std::invalid_argument("SpinSystem: 2l must be a positive integer, got " +
                                std::to_string(two_ell));
  }
}

SpinSystem SpinSystem::from_ell(double ell) {
  const double doubled = 2.0 * ell;
  const double rounded = std::round(doubled);
  if (std::abs(doubled - rounded) > 1e-9 || rounded < 1.0) {
    throw std::invalid_argument("SpinSystem: l must be a positive half-integer, got " +
                                std::to_string(ell));
  }
  return SpinSystem(static_cast<int>(rounded));
}

SpinSystem SpinSystem::from_dim(int dim) {
  if (dim < 2) {
    throw std::invalid_argument("SpinSystem: dimension must be at least 2, got " +
                                std::to_string(dim));
  }
  return SpinSystem(dim - 1);
}

}  // namespace gyrosim
