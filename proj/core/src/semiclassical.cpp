#include "gyrosim/semiclassical.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gyrosim {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Derivative {
  double rdot;
  double thetadot;
};

Derivative rhs(const SemiclassicalState& s, bool corrected) {
  SemiclassicalState state = s;
  Derivative d{};
  if (corrected) {
    d.rdot = rhs_corrected(state).rdot;
  } else {
    d.rdot = rhs_leading(state).rdot;
  }
  d.thetadot = rhs_leading(state).thetadot;
  return d;
}

SemiclassicalState rk4_step(const SemiclassicalState& s, double h,
                            bool corrected) {
  const auto eval = [&](double r, double theta) {
    SemiclassicalState probe = s;
    probe.r = r;
    probe.theta = theta;
    return rhs(probe, corrected);
  };
  const Derivative k1 = eval(s.r, s.theta);
  const Derivative k2 =
      eval(s.r + 0.5 * h * k1.rdot, s.theta + 0.5 * h * k1.thetadot);
  const Derivative k3 =
      eval(s.r + 0.5 * h * k2.rdot, s.theta + 0.5 * h * k2.thetadot);
  const Derivative k4 = eval(s.r + h * k3.rdot, s.theta + h * k3.thetadot);

  SemiclassicalState out = s;
  out.r = s.r + (h / 6.0) * (k1.rdot + 2.0 * k2.rdot + 2.0 * k3.rdot + k4.rdot);
  out.theta = s.theta + (h / 6.0) * (k1.thetadot + 2.0 * k2.thetadot +
                                     2.0 * k3.thetadot + k4.thetadot);
  return out;
}

}  // namespace

Rates rhs_leading(const SemiclassicalState& s) {
  if (!(s.r > 0.0)) {
    throw std::invalid_argument("rhs_leading: r must be positive, got " +
                                std::to_string(s.r));
  }
  const double lam = s.lambda();
  Rates out;
  out.rdot = lam * (1.0 - s.r * s.r) * std::cos(s.theta);
  out.thetadot =
      -lam * (1.0 + s.r * s.r) / (2.0 * s.r) * std::sin(s.theta);
  return out;
}

CorrectedRate rhs_corrected(const SemiclassicalState& s) {
  if (!(s.r > 0.0)) {
    throw std::invalid_argument("rhs_corrected: r must be positive");
  }
  const double lam = s.lambda();
  const double st = std::sin(s.theta);
  CorrectedRate out;
  out.rdot = lam * (1.0 - s.r * s.r) * std::cos(s.theta) -
             (1.0 + s.sz * s.sz) / (2.0 * s.ell * s.ell) * s.r -
             0.5 * lam * lam * st * st * s.r * s.r * s.r;
  out.within_validity = s.theta > 0.5 * kPi;
  return out;
}

std::vector<SemiclassicalState> integrate(const SemiclassicalState& s0,
                                          int n_steps, IntegrateOptions opts) {
  if (n_steps < 0) {
    throw std::invalid_argument("integrate: n_steps must be >= 0");
  }
  if (opts.substeps < 1) {
    throw std::invalid_argument("integrate: substeps must be >= 1");
  }
  std::vector<SemiclassicalState> out;
  out.reserve(n_steps + 1);
  out.push_back(s0);

  SemiclassicalState s = s0;
  for (int n = 0; n < n_steps; ++n) {
    int substeps = opts.substeps;
    if (opts.auto_substep && opts.use_corrections && s.theta > kPi - 0.35) {
      substeps *= 4;
    }
    const double h = 1.0 / substeps;
    for (int k = 0; k < substeps; ++k) {
      s = rk4_step(s, h, opts.use_corrections);
    }
    if (s.r < -1e-6 || s.r > 1.0 + 1e-6) {
      throw std::runtime_error("integrate: r left [0,1] at step " +
                               std::to_string(n + 1));
    }
    out.push_back(s);
  }
  return out;
}

double analytic_theta(double t, double theta0, double lambda) {
  if (!(theta0 >= 0.0 && theta0 < kPi)) {
    throw std::invalid_argument(
        "analytic_theta: theta0 must lie in [0, pi); the flow is undefined "
        "at the inverted pole");
  }
  return 2.0 * std::atan(std::exp(-lambda * t) * std::tan(0.5 * theta0));
}

double analytic_epsilon(double t, double tau_ref, double eps_ref,
                        double theta0, double lambda) {
  const double c0 = std::cos(theta0);
  const auto envelope = [&](double time) {
    const double u = lambda * time;
    const double v = std::cosh(u) + c0 * std::sinh(u);
    return v * v;
  };
  return eps_ref * envelope(tau_ref) / envelope(t);
}

RegimeMarkers regime_detect(const std::vector<double>& r,
                            const std::vector<double>& theta, double ell,
                            double sz, RegimeThresholds thr) {
  if (r.size() != theta.size()) {
    throw std::invalid_argument("regime_detect: r and theta length mismatch");
  }
  const int n = static_cast<int>(r.size());
  RegimeMarkers out;
  if (n < 3) return out;

  double peak_eps = 0.0;
  int peak_step = 0;
  double max_dev = 0.0;
  for (int k = 0; k < n; ++k) {
    const double eps = 1.0 - r[k];
    if (eps > peak_eps) {
      peak_eps = eps;
      peak_step = k;
    }
    max_dev = std::max(max_dev, std::abs(r[k] - r[0]));
  }
  out.peak_epsilon = peak_eps;
  out.peak_step = peak_step;

  // A trajectory that never moves (fixed point) has no regimes to split.
  if (max_dev < 0.1 * thr.track_abs) return out;

  const auto corrected_step_from = [&](double r0, double th0) {
    SemiclassicalState s{r0, th0, ell, sz};
    IntegrateOptions opts;
    opts.use_corrections = true;
    return integrate(s, 1, opts).back();
  };

  // Regime 1 ends when the corrected equation predicts the per-step change
  // of r to within a relative tolerance, and keeps doing so.
  for (int k = 0; k + thr.local_run < n && !out.t1.has_value(); ++k) {
    bool run_ok = true;
    for (int j = k; j < k + thr.local_run; ++j) {
      const double predicted = corrected_step_from(r[j], theta[j]).r;
      const double err = std::abs(predicted - r[j + 1]);
      const double scale = std::max(std::abs(r[j + 1] - r[j]), 1e-12);
      if (err > thr.local_rel * scale) {
        run_ok = false;
        break;
      }
    }
    if (run_ok) out.t1 = k;
  }
  if (!out.t1.has_value()) return out;

  // Regime 2 ends when the corrected trajectory re-anchored at t1 drifts
  // from the simulation by more than the absolute window.
  {
    SemiclassicalState s{r[*out.t1], theta[*out.t1], ell, sz};
    IntegrateOptions opts;
    opts.use_corrections = true;
    for (int k = *out.t1 + 1; k < n; ++k) {
      s = integrate(s, 1, opts).back();
      if (std::abs(s.r - r[k]) > thr.track_abs) {
        out.t2 = k;
        break;
      }
    }
  }
  if (!out.t2.has_value()) return out;

  // Regime 4 starts at the first anchor from which the analytic recovery
  // expression tracks every later resolvable step. Steps with
  // eps * d < epsilon_floor_dim are below the resolution of the
  // semiclassical description and are not scored.
  const double lambda = sz / ell;
  const double theta_start = theta[0];
  const double dim = 2.0 * ell + 1.0;
  for (int anchor = *out.t2; anchor < n - 1; ++anchor) {
    const double eps_anchor = 1.0 - r[anchor];
    if (eps_anchor <= 0.0) continue;
    bool ok = true;
    int scored = 0;
    for (int m = anchor + 1; m < n; ++m) {
      const double eps_m = 1.0 - r[m];
      if (eps_m * dim < thr.epsilon_floor_dim) continue;
      const double pred =
          analytic_epsilon(m, anchor, eps_anchor, theta_start, lambda);
      if (std::abs(pred - eps_m) > thr.analytic_rel * eps_m) {
        ok = false;
        break;
      }
      ++scored;
    }
    if (ok && scored > 0) {
      out.t3 = anchor;
      break;
    }
  }
  return out;
}

}  // namespace gyrosim
