#pragma once

#include <Eigen/Dense>

#include "gyrosim/spin_system.hpp"
#include "gyrosim/types.hpp"

namespace gyrosim {

// Angular momentum components in the |l,m> basis ordered by descending m
// (index 0 is m = +l).
struct AngularMomentum {
  Matrix lx, ly, lz;
};

AngularMomentum angular_momentum_operators(const SpinSystem& sys);

// Frame rotated about y by theta: lx_theta = cos(theta) Lx - sin(theta) Lz,
// lz_theta = sin(theta) Lx + cos(theta) Lz. Ly is unchanged.
struct RotatedFrame {
  Matrix lx, ly, lz;
};

RotatedFrame rotated_operators(const AngularMomentum& ops, double theta);

// |l,l-k>, k counted from the top of the ladder.
Vector basis_state(const SpinSystem& sys, int k_from_top);

// exp(-i theta Ly)|l,l>: polarized along the xz-plane axis with polar angle
// theta. All amplitudes are real and non-negative for theta in [0, pi].
Vector coherent_state(const SpinSystem& sys, double theta);

// Rotation operators, used to move states and frames around.
Matrix rotation_y(const SpinSystem& sys, double angle);
Matrix rotation_z(const SpinSystem& sys, double angle);

// Spin-1/2 probe, diagonal in Sz with mean polarization sz in [-1/2, 1/2].
class ProbeState {
 public:
  explicit ProbeState(double sz);

  double sz() const { return sz_; }
  Eigen::Matrix2cd matrix() const;
  Eigen::Matrix2cd sqrt_matrix() const;

 private:
  double sz_;
};

// Spin-1/2 operators S = sigma/2, |up> first.
Eigen::Matrix2cd pauli_x();
Eigen::Matrix2cd pauli_y();
Eigen::Matrix2cd pauli_z();

}  // namespace gyrosim
