#include "gyrosim/estimators.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/SVD>

#include "gyrosim/spin_algebra.hpp"

namespace gyrosim {

namespace {

double real_expectation(const Matrix& rho, const Matrix& op) {
  return (rho * op).trace().real();
}

}  // namespace

BlochEstimate bloch_estimate(const Matrix& rho, const SpinSystem& sys) {
  if (rho.rows() != sys.dim() || rho.cols() != sys.dim()) {
    throw std::invalid_argument("bloch_estimate: dimension mismatch");
  }
  const AngularMomentum ops = angular_momentum_operators(sys);
  BlochEstimate out;
  out.lx = real_expectation(rho, ops.lx);
  out.ly = real_expectation(rho, ops.ly);
  out.lz = real_expectation(rho, ops.lz);
  const double norm =
      std::sqrt(out.lx * out.lx + out.ly * out.ly + out.lz * out.lz);
  out.r = norm / sys.ell();
  if (out.r >= 1e-9) {
    out.theta = std::atan2(std::hypot(out.lx, out.ly), out.lz);
    out.phi_az = std::atan2(out.ly, out.lx);
  }
  return out;
}

MomentSet moment_set(const Matrix& rho, const SpinSystem& sys, double theta) {
  if (rho.rows() != sys.dim() || rho.cols() != sys.dim()) {
    throw std::invalid_argument("moment_set: dimension mismatch");
  }
  const RotatedFrame f =
      rotated_operators(angular_momentum_operators(sys), theta);
  MomentSet m;
  m.x = real_expectation(rho, f.lx);
  m.z = real_expectation(rho, f.lz);
  m.xx = real_expectation(rho, f.lx * f.lx);
  m.yy = real_expectation(rho, f.ly * f.ly);
  m.zz = real_expectation(rho, f.lz * f.lz);
  m.xy = 0.5 * real_expectation(rho, f.lx * f.ly + f.ly * f.lx);
  m.xz = 0.5 * real_expectation(rho, f.lx * f.lz + f.lz * f.lx);
  return m;
}

MomentUpdate moment_update_prediction(const MomentSet& m, double theta,
                                      double sz, const SpinSystem& sys) {
  const double d2 = static_cast<double>(sys.dim()) * sys.dim();
  const double cas = sys.casimir();
  const double ct = std::cos(theta);
  const double st = std::sin(theta);

  MomentUpdate out;
  out.lx_next = -(4.0 / d2) * sz * ct * m.xz -
                (4.0 / d2) * sz * st * (cas - m.xx);
  out.lz_next = (1.0 - 2.0 / d2) * m.z + (4.0 / d2) * sz * st * m.xz +
                (4.0 / d2) * sz * ct * (cas - m.zz);
  return out;
}

double purity(const Matrix& rho) {
  return (rho * rho).trace().real();
}

double trace_norm(const Matrix& op) {
  Eigen::JacobiSVD<Matrix> svd(op);
  return svd.singularValues().sum();
}

}  // namespace gyrosim
