#include "gyrosim/coherence.hpp"

#include <cmath>
#include <stdexcept>

#include "gyrosim/semiclassical.hpp"

namespace gyrosim {

CoherenceResult coherence_element(double theta, double phi, int n_steps,
                                  const ChannelConfig& cfg) {
  if (n_steps < 0) {
    throw std::invalid_argument("coherence_element: n_steps must be >= 0");
  }
  const Channel channel(cfg);
  const Vector bra = coherent_state(cfg.sys, theta);
  const Vector ket = coherent_state(cfg.sys, phi);

  Matrix dyad = bra * ket.adjoint();
  for (int k = 0; k < n_steps; ++k) {
    dyad = channel.apply(dyad);
  }

  CoherenceResult out;
  out.value = bra.adjoint() * dyad * ket;
  if (n_steps == 1) {
    out.one_step_prediction = off_diagonal_prediction(theta, phi, cfg);
  }
  return out;
}

Complex off_diagonal_prediction(double theta, double phi,
                                const ChannelConfig& cfg) {
  const double d = cfg.sys.dim();
  const double s = cfg.sz;
  const double ell = cfg.sys.ell();
  const double half = 0.5 * (theta - phi);
  const double cos_half_sq = std::cos(half) * std::cos(half);
  return cos_half_sq - std::cos(theta - phi) / d +
         (2.0 * ell * s / (d * d)) * (std::cos(theta) + std::cos(phi)) -
         (2.0 * s - cos_half_sq) / (d * d);
}

ChiResidual residual_chi(double theta, double phi, const ChannelConfig& cfg) {
  const Channel channel(cfg);
  const double lambda = cfg.sz / cfg.sys.ell();
  const double weight = std::pow(std::cos(0.5 * (theta - phi)), 2);

  const Vector bra0 = coherent_state(cfg.sys, theta);
  const Vector ket0 = coherent_state(cfg.sys, phi);
  const Matrix evolved = channel.apply(bra0 * ket0.adjoint());

  const auto residual_against = [&](double theta_next, double phi_next) {
    const Vector bra = coherent_state(cfg.sys, theta_next);
    const Vector ket = coherent_state(cfg.sys, phi_next);
    return (evolved - weight * (bra * ket.adjoint())).eval();
  };

  // Updated angles: one interaction of the relaxation flow.
  const double theta_up = analytic_theta(1.0, theta, lambda);
  const double phi_up = analytic_theta(1.0, phi, lambda);

  // Exact angles: polar angles of the one-step-evolved pure components.
  const auto evolved_angle = [&](const Vector& psi, double fallback) {
    const Matrix rho = channel.apply(psi * psi.adjoint());
    const BlochEstimate b = bloch_estimate(rho, cfg.sys);
    return b.theta.value_or(fallback);
  };
  const double theta_ex = evolved_angle(bra0, theta);
  const double phi_ex = evolved_angle(ket0, phi);

  ChiResidual out;
  out.chi = residual_against(theta_up, phi_up);
  out.trace_norm_updated = trace_norm(out.chi);
  out.trace_norm_literal = trace_norm(residual_against(theta, phi));
  out.trace_norm_exact_angles =
      trace_norm(residual_against(theta_ex, phi_ex));
  return out;
}

}  // namespace gyrosim
