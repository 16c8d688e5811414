#pragma once

#include <optional>

#include "gyrosim/channel.hpp"
#include "gyrosim/types.hpp"

namespace gyrosim {

// <theta| E^n(|theta><phi|) |phi>, the off-diagonal weight of a coherent
// superposition after n interactions, sandwiched with the initial states.
struct CoherenceResult {
  Complex value;
  // Closed-form one-step prediction, filled only for n = 1.
  std::optional<Complex> one_step_prediction;
};

CoherenceResult coherence_element(double theta, double phi, int n_steps,
                                  const ChannelConfig& cfg);

// The printed one-step approximation for the matrix element above. Its own
// accuracy is O(1/d^2).
Complex off_diagonal_prediction(double theta, double phi,
                                const ChannelConfig& cfg);

// Residual chi = E(|theta><phi|) - cos^2((theta-phi)/2) |theta'><phi'|.
// Three conventions for the subtracted dyad are evaluated side by side:
//   updated:      theta', phi' advanced one step along the relaxation flow
//   literal:      theta' = theta, phi' = phi
//   exact_angles: theta', phi' read off the one-step-evolved pure states
struct ChiResidual {
  Matrix chi;  // updated-angle convention
  double trace_norm_updated = 0.0;
  double trace_norm_literal = 0.0;
  double trace_norm_exact_angles = 0.0;
};

ChiResidual residual_chi(double theta, double phi, const ChannelConfig& cfg);

}  // namespace gyrosim
