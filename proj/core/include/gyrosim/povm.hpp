#pragma once

#include <Eigen/Dense>

#include "gyrosim/channel.hpp"
#include "gyrosim/types.hpp"

namespace gyrosim {

// Effects induced on the gyroscope by measuring the outgoing probe along the
// unit axis u (projectors (I +- u.sigma)/2).
struct PovmPair {
  Matrix lambda_plus;
  Matrix lambda_minus;
  Eigen::Vector3d axis_u;
};

// Heralded form Tr_S[(I (x) sqrt(xi)) U^dag (I (x) Pi_pm) U (I (x) sqrt(xi))].
PovmPair induced_povm_general(const Eigen::Vector3d& u,
                              const ChannelConfig& cfg);

// Printed closed form (1/2) Tr_S[Pi_pm xi] I +- (<S> x u).L / (l + 1/2),
// valid at tau = pi/d. Kept verbatim; its completeness defect and O(1/d^2)
// remainder are what the audit measures.
PovmPair induced_povm_closed_form(const Eigen::Vector3d& u,
                                  const ChannelConfig& cfg);

// Outcome probability computed on the joint space, without the effects:
// Tr[(I (x) Pi_pm) U (rho (x) xi) U^dag]. sign is +1 or -1.
double direct_outcome_probability(const Eigen::Vector3d& u,
                                  const ChannelConfig& cfg, const Matrix& rho,
                                  int sign);

// Least-squares coefficients of op in span{I, Lx, Ly, Lz} and the Frobenius
// norm of what is left over.
struct AxisProjection {
  double coeff_i = 0.0;
  Eigen::Vector3d coeff_l = Eigen::Vector3d::Zero();
  double residual_norm = 0.0;
};

AxisProjection project_onto_linear_span(const Matrix& op,
                                        const SpinSystem& sys);

}  // namespace gyrosim
