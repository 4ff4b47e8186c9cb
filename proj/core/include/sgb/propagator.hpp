#pragma once

#include <functional>

#include "sgb/model.hpp"

namespace sgb {

// Fundamental solutions of z'' = (k_grad/m) z over a step dt, branch-correct
// in the sign of k_grad:
//
//   c                = cosh(w dt) | cos(w dt) | 1          (k>0 | k<0 | k=0)
//   s_over_omega     = sinh(w dt)/w | sin(w dt)/w | dt
//   accel_response   = (c - 1)/(k/m)        -> dt^2/2 as k -> 0
//   accel_response_int = (s_over_omega - dt)/(k/m) -> dt^3/6 as k -> 0
//
// with w = sqrt(|k_grad|/m). accel_response is the position response to a
// constant unit acceleration; accel_response_int is its time integral (used
// by the closed-form action phase). Near k = 0 all four are evaluated by
// Taylor series in u = (k_grad/m) dt^2 to avoid cancellation.
struct HarmonicBasis {
  double omega_sq_signed;  // k_grad/m [1/s^2]
  double dt;               // [s]
  double c;
  double s_over_omega;       // [s]
  double accel_response;     // [s^2]
  double accel_response_int; // [s^3]
};

HarmonicBasis harmonic_basis(double k_grad, double mass, double dt);

// Jacobian of the (z, p) map over one segment. Symplectic: det == 1.
struct Jacobian2 {
  double dz_dz0;
  double dz_dp0;
  double dp_dz0;
  double dp_dp0;

  double det() const { return dz_dz0 * dp_dp0 - dz_dp0 * dp_dz0; }
};

struct SegmentResult {
  PhaseSpacePoint end;  // phase carried through unchanged
  Jacobian2 jacobian;
};

// Exact evolution of (z, p) under a constant force plus linear gradient,
// H = p^2/2m - F z - k z^2/2, for a signed step dt:
//   z(dt) = z c + (p/m) s_over_omega + (F/m) accel_response
//   p(dt) = p c + (F + k z) s_over_omega
// The returned point keeps the start phase (use segment_phase for the action).
SegmentResult propagate_segment(const PhaseSpacePoint& start, double force,
                                double k_grad, double mass, double dt);

// Closed-form action phase (1/2hbar) * Integral over the segment of z(t)*F dt
// accumulated along the same trajectory. Requires dt >= 0.
double segment_phase(const PhaseSpacePoint& start, double force, double k_grad,
                     double mass, double dt, double hbar);

// Instantaneous momentum kick: p += dp; z and phase unchanged.
PhaseSpacePoint apply_kick(const PhaseSpacePoint& start, double dp);

// Independent cross-check integrator: classic RK4 on (z, p) with a
// time-dependent force, Simpson accumulation of the action integrand z(t)F(t),
// and one Richardson extrapolation step (runs at n and 2n steps, combines as
// (16 a_2n - a_n)/15). Negative t_span integrates backwards. steps >= 100.
PhaseSpacePoint oracle_integrate(const PhaseSpacePoint& start,
                                 const std::function<double(double)>& force,
                                 double k_grad, double mass, double t_span,
                                 double hbar, int steps = 10000);

} // namespace sgb
