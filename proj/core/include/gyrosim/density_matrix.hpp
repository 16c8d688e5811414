#pragma once

#include <stdexcept>

#include "gyrosim/spin_system.hpp"
#include "gyrosim/types.hpp"

namespace gyrosim {

// Thrown when an iterated state drifts out of the density-matrix cone by
// more than the configured tolerance.
class NumericalDegradationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Validated density matrix: Hermitian, unit trace, positive semidefinite up
// to a small negative tolerance on the lowest eigenvalue.
class DensityMatrix {
 public:
  explicit DensityMatrix(Matrix rho, double positivity_tol = 1e-10);

  static DensityMatrix pure(const Vector& psi);
  static DensityMatrix maximally_mixed(const SpinSystem& sys);

  const Matrix& matrix() const { return rho_; }
  int dim() const { return static_cast<int>(rho_.rows()); }

  // Most negative eigenvalue observed at validation time.
  double min_eigenvalue() const { return min_eigenvalue_; }

 private:
  Matrix rho_;
  double min_eigenvalue_;
};

}  // namespace gyrosim
