#include "sgb/propagator.hpp"

#include <cmath>

namespace sgb {

namespace {

// Series switch: below this |u| the direct forms (c-1)/w^2 and (s/w - dt)/w^2
// lose ~eps/|u| to cancellation; the u^4 series is exact to ~3e-17 here.
constexpr double kSeriesSwitch = 1e-2;

} // namespace

HarmonicBasis harmonic_basis(double k_grad, double mass, double dt) {
  if (!(mass > 0.0) || !std::isfinite(mass))
    throw PhysicsError("harmonic_basis: mass must be finite and > 0");
  if (!std::isfinite(k_grad) || !std::isfinite(dt))
    throw PhysicsError("harmonic_basis: k_grad and dt must be finite");

  const double w2 = k_grad / mass;  // signed omega^2
  const double u = w2 * dt * dt;

  HarmonicBasis b;
  b.omega_sq_signed = w2;
  b.dt = dt;

  if (std::fabs(u) <= kSeriesSwitch) {
    // Taylor series in u: c = sum u^k/(2k)!, s/w = dt sum u^k/(2k+1)!, etc.
    b.c = 1.0 + u * (1.0 / 2 + u * (1.0 / 24 + u * (1.0 / 720 + u / 40320)));
    b.s_over_omega =
        dt * (1.0 + u * (1.0 / 6 + u * (1.0 / 120 +
                                        u * (1.0 / 5040 + u / 362880))));
    b.accel_response =
        dt * dt * (1.0 / 2 + u * (1.0 / 24 + u * (1.0 / 720 +
                                                  u * (1.0 / 40320 +
                                                       u / 3628800))));
    b.accel_response_int =
        dt * dt * dt * (1.0 / 6 + u * (1.0 / 120 +
                                       u * (1.0 / 5040 +
                                            u * (1.0 / 362880 +
                                                 u / 39916800))));
  } else {
    const double w = std::sqrt(std::fabs(w2));
    const double x = w * dt;
    if (w2 > 0.0) {
      b.c = std::cosh(x);
      b.s_over_omega = std::sinh(x) / w;
    } else {
      b.c = std::cos(x);
      b.s_over_omega = std::sin(x) / w;
    }
    b.accel_response = (b.c - 1.0) / w2;
    b.accel_response_int = (b.s_over_omega - dt) / w2;
  }
  return b;
}

SegmentResult propagate_segment(const PhaseSpacePoint& start, double force,
                                double k_grad, double mass, double dt) {
  const HarmonicBasis b = harmonic_basis(k_grad, mass, dt);

  SegmentResult r;
  r.end.z = start.z * b.c + (start.p / mass) * b.s_over_omega +
            (force / mass) * b.accel_response;
  r.end.p = start.p * b.c + (force + k_grad * start.z) * b.s_over_omega;
  r.end.phase = start.phase;
  r.jacobian = Jacobian2{b.c, b.s_over_omega / mass, k_grad * b.s_over_omega,
                         b.c};
  return r;
}

double segment_phase(const PhaseSpacePoint& start, double force, double k_grad,
                     double mass, double dt, double hbar) {
  if (dt < 0.0)
    throw PhysicsError("segment_phase: dt must be >= 0");
  if (!(hbar > 0.0))
    throw PhysicsError("segment_phase: hbar must be > 0");

  const HarmonicBasis b = harmonic_basis(k_grad, mass, dt);
  // (F/2hbar) * Integral z(t) dt with z(t) expanded in the basis functions.
  const double integral_z = start.z * b.s_over_omega +
                            (start.p / mass) * b.accel_response +
                            (force / mass) * b.accel_response_int;
  return force / (2.0 * hbar) * integral_z;
}

PhaseSpacePoint apply_kick(const PhaseSpacePoint& start, double dp) {
  if (!std::isfinite(dp)) throw PhysicsError("apply_kick: dp must be finite");
  PhaseSpacePoint out = start;
  out.p += dp;
  return out;
}

namespace {

struct Zp {
  double z;
  double p;
};

// One RK4 sweep with n steps plus composite-Simpson accumulation of
// z(t) F(t); n must be even.
PhaseSpacePoint rk4_sweep(const PhaseSpacePoint& start,
                          const std::function<double(double)>& force,
                          double k_grad, double mass, double t_span,
                          double hbar, long n) {
  const double h = t_span / static_cast<double>(n);
  Zp s{start.z, start.p};
  double simpson = s.z * force(0.0);  // weight-1 end point

  auto deriv = [&](double t, const Zp& y) {
    return Zp{y.p / mass, force(t) + k_grad * y.z};
  };

  for (long i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * h;
    const Zp k1 = deriv(t, s);
    const Zp k2 = deriv(t + 0.5 * h, Zp{s.z + 0.5 * h * k1.z, s.p + 0.5 * h * k1.p});
    const Zp k3 = deriv(t + 0.5 * h, Zp{s.z + 0.5 * h * k2.z, s.p + 0.5 * h * k2.p});
    const Zp k4 = deriv(t + h, Zp{s.z + h * k3.z, s.p + h * k3.p});
    s.z += h / 6.0 * (k1.z + 2.0 * k2.z + 2.0 * k3.z + k4.z);
    s.p += h / 6.0 * (k1.p + 2.0 * k2.p + 2.0 * k3.p + k4.p);

    const double tj = static_cast<double>(i + 1) * h;
    const double w = (i + 1 == n) ? 1.0 : ((i + 1) % 2 == 1 ? 4.0 : 2.0);
    simpson += w * s.z * force(tj);
  }

  PhaseSpacePoint out;
  out.z = s.z;
  out.p = s.p;
  out.phase = start.phase + simpson * h / 3.0 / (2.0 * hbar);
  return out;
}

} // namespace

PhaseSpacePoint oracle_integrate(const PhaseSpacePoint& start,
                                 const std::function<double(double)>& force,
                                 double k_grad, double mass, double t_span,
                                 double hbar, int steps) {
  if (steps < 100)
    throw PhysicsError("oracle_integrate: needs at least 100 steps");
  if (!(mass > 0.0))
    throw PhysicsError("oracle_integrate: mass must be > 0");
  if (!(hbar > 0.0))
    throw PhysicsError("oracle_integrate: hbar must be > 0");
  if (!std::isfinite(t_span))
    throw PhysicsError("oracle_integrate: t_span must be finite");

  const long n = steps % 2 == 0 ? steps : steps + 1;
  const PhaseSpacePoint a = rk4_sweep(start, force, k_grad, mass, t_span, hbar, n);
  const PhaseSpacePoint b = rk4_sweep(start, force, k_grad, mass, t_span, hbar, 2 * n);

  // Richardson extrapolation for the O(h^4) scheme: (16 b - a)/15.
  PhaseSpacePoint out;
  out.z = (16.0 * b.z - a.z) / 15.0;
  out.p = (16.0 * b.p - a.p) / 15.0;
  out.phase = (16.0 * b.phase - a.phase) / 15.0;
  return out;
}

} // namespace sgb
