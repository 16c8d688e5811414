#include "gyrosim/density_matrix.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

namespace gyrosim {

DensityMatrix::DensityMatrix(Matrix rho, double positivity_tol)
    : rho_(std::move(rho)), min_eigenvalue_(0.0) {
  if (rho_.rows() != rho_.cols() || rho_.rows() < 1) {
    throw std::invalid_argument("DensityMatrix: matrix must be square");
  }
  const double herm = (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-12) {
    throw std::invalid_argument(
        "DensityMatrix: not Hermitian, max asymmetry " + std::to_string(herm));
  }
  const double tr_err = std::abs(rho_.trace() - Complex(1.0, 0.0));
  if (tr_err > 1e-12) {
    throw std::invalid_argument("DensityMatrix: trace differs from 1 by " +
                                std::to_string(tr_err));
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho_,
                                           Eigen::EigenvaluesOnly);
  min_eigenvalue_ = es.eigenvalues().minCoeff();
  if (min_eigenvalue_ < -positivity_tol) {
    throw NumericalDegradationError(
        "DensityMatrix: lowest eigenvalue " + std::to_string(min_eigenvalue_) +
        " below tolerance " + std::to_string(-positivity_tol));
  }
}

DensityMatrix DensityMatrix::pure(const Vector& psi) {
  const double norm = psi.norm();
  if (norm < 1e-300) {
    throw std::invalid_argument("DensityMatrix::pure: zero vector");
  }
  const Vector unit = psi / norm;
  return DensityMatrix(unit * unit.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(const SpinSystem& sys) {
  const int d = sys.dim();
  return DensityMatrix(Matrix::Identity(d, d) / static_cast<double>(d));
}

}  // namespace gyrosim
