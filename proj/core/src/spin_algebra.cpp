#include "gyrosim/spin_algebra.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gyrosim {

namespace {

// Raising matrix element <l,m+1| L+ |l,m> = sqrt(l(l+1) - m(m+1)), done in
// integer arithmetic on 2m to stay exact for half-integer l.
double raising_element(int two_ell, int two_m) {
  const double num =
      two_ell * (two_ell + 2) - two_m * (two_m + 2);
  return 0.5 * std::sqrt(num);
}

}  // namespace

AngularMomentum angular_momentum_operators(const SpinSystem& sys) {
  const int d = sys.dim();
  const int two_ell = sys.two_ell();

  Matrix lp = Matrix::Zero(d, d);  // L+
  Matrix lz = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    const int two_m = two_ell - 2 * i;  // descending m
    lz(i, i) = 0.5 * two_m;
    if (i > 0) {
      // |l,m> at column i goes up to row i-1.
      lp(i - 1, i) = raising_element(two_ell, two_m);
    }
  }
  const Matrix lm = lp.adjoint();

  AngularMomentum ops;
  ops.lx = 0.5 * (lp + lm);
  ops.ly = Complex(0.0, -0.5) * (lp - lm);
  ops.lz = lz;
  return ops;
}

RotatedFrame rotated_operators(const AngularMomentum& ops, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  RotatedFrame out;
  out.lx = c * ops.lx - s * ops.lz;
  out.ly = ops.ly;
  out.lz = s * ops.lx + c * ops.lz;
  return out;
}

Vector basis_state(const SpinSystem& sys, int k_from_top) {
  if (k_from_top < 0 || k_from_top >= sys.dim()) {
    throw std::invalid_argument("basis_state: index out of range");
  }
  Vector v = Vector::Zero(sys.dim());
  v(k_from_top) = 1.0;
  return v;
}

Vector coherent_state(const SpinSystem& sys, double theta) {
  if (!(theta >= 0.0 && theta <= kPi)) {
    throw std::invalid_argument("coherent_state: theta must lie in [0, pi], got " +
                                std::to_string(theta));
  }
  const int d = sys.dim();
  const int two_ell = sys.two_ell();
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);

  // Amplitude on |l,m>: sqrt(C(2l, l+m)) c^(l+m) s^(l-m), evaluated in log
  // space so binomials up to 2l ~ 80 cannot overflow.
  Vector v = Vector::Zero(d);
  const double lg_top = std::lgamma(two_ell + 1.0);
  for (int i = 0; i < d; ++i) {
    const int n_up = two_ell - i;  // l+m
    const int n_dn = i;            // l-m
    if ((c == 0.0 && n_up > 0) || (s == 0.0 && n_dn > 0)) {
      continue;
    }
    double log_amp = 0.5 * (lg_top - std::lgamma(n_up + 1.0) -
                            std::lgamma(n_dn + 1.0));
    if (n_up > 0) log_amp += n_up * std::log(c);
    if (n_dn > 0) log_amp += n_dn * std::log(s);
    v(i) = std::exp(log_amp);
  }
  v.normalize();  // removes residual rounding in the tail
  return v;
}

Matrix rotation_y(const SpinSystem& sys, double angle) {
  const AngularMomentum ops = angular_momentum_operators(sys);
  Eigen::SelfAdjointEigenSolver<Matrix> es(ops.ly);
  const Vector phases = (Complex(0.0, -angle) *
                         es.eigenvalues().cast<Complex>().array())
                            .exp();
  return es.eigenvectors() * phases.asDiagonal() *
         es.eigenvectors().adjoint();
}

Matrix rotation_z(const SpinSystem& sys, double angle) {
  const int d = sys.dim();
  Matrix r = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    const double m = 0.5 * (sys.two_ell() - 2 * i);
    r(i, i) = std::exp(Complex(0.0, -angle * m));
  }
  return r;
}

ProbeState::ProbeState(double sz) : sz_(sz) {
  if (std::abs(sz) > 0.5 + 1e-12) {
    throw std::invalid_argument("ProbeState: |<Sz>| cannot exceed 1/2, got " +
                                std::to_string(sz));
  }
}

Eigen::Matrix2cd ProbeState::matrix() const {
  Eigen::Matrix2cd xi = Eigen::Matrix2cd::Zero();
  xi(0, 0) = 0.5 + sz_;
  xi(1, 1) = 0.5 - sz_;
  return xi;
}

Eigen::Matrix2cd ProbeState::sqrt_matrix() const {
  Eigen::Matrix2cd root = Eigen::Matrix2cd::Zero();
  root(0, 0) = std::sqrt(std::max(0.0, 0.5 + sz_));
  root(1, 1) = std::sqrt(std::max(0.0, 0.5 - sz_));
  return root;
}

Eigen::Matrix2cd pauli_x() {
  Eigen::Matrix2cd m;
  m << 0, 1, 1, 0;
  return m;
}

Eigen::Matrix2cd pauli_y() {
  Eigen::Matrix2cd m;
  m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return m;
}

Eigen::Matrix2cd pauli_z() {
  Eigen::Matrix2cd m;
  m << 1, 0, 0, -1;
  return m;
}

}  // namespace gyrosim
