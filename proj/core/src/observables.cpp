#include "sgb/observables.hpp"

#include <cmath>

#include "sgb/propagator.hpp"

namespace sgb {

namespace {

double common_end_time(const ArmTrajectory& arm1, const ArmTrajectory& arm2) {
  const double t1 = arm1.end_time();
  const double t2 = arm2.end_time();
  const double scale = std::fmax(std::fabs(t1), std::fabs(t2));
  if (std::fabs(t1 - t2) > 1e-12 * scale)
    throw PhysicsError("trajectories end at different times");
  return t1;
}

} // namespace

double phase_difference(const ArmTrajectory& arm1, const ArmTrajectory& arm2,
                        double hbar) {
  if (!(hbar > 0.0)) throw PhysicsError("phase_difference: hbar must be > 0");
  common_end_time(arm1, arm2);
  const PhaseSpacePoint& a = arm1.final_state();
  const PhaseSpacePoint& b = arm2.final_state();
  return b.phase - a.phase + (a.z * b.p - b.z * a.p) / (2.0 * hbar);
}

PhaseResult gradient_phase(const InterferometerSequence& seq,
                           const AtomSpecies& species, const Environment& env,
                           const PhaseSpacePoint& initial) {
  const auto [a1, a2] = run(seq, species, env, initial);
  const double total = phase_difference(a1, a2, env.hbar);

  const Environment env0 = env.with_k_grad(0.0);
  const auto [b1, b2] = run(seq, species, env0, initial);
  const double k_independent = phase_difference(b1, b2, env0.hbar);

  return PhaseResult{total, total - k_independent, k_independent};
}

double formula_conventional(const Environment& env, const AtomSpecies& species,
                            double p0, double total_time) {
  if (!(total_time > 0.0))
    throw PhysicsError("formula_conventional: total_time must be > 0");
  const double m = species.mass;
  const double T = total_time;
  const double K = env.k_grad;
  const double k = species.hbar_k / env.hbar;  // laser wavenumber [1/m]
  const double bracket = p0 * T / m + species.hbar_k * T / (2.0 * m) +
                         env.f0 * T * T / (2.0 * m);
  return -(K * T * T * k / (32.0 * m)) * bracket;
}

double formula_pulse_regime(const Environment& env, const AtomSpecies& species,
                            double p0, double delta_p, double total_time) {
  if (!(total_time > 0.0))
    throw PhysicsError("formula_pulse_regime: total_time must be > 0");
  if (!(delta_p > 0.0))
    throw PhysicsError("formula_pulse_regime: delta_p must be > 0");
  const double a = alpha(species.mu1, species.mu2);
  const double m = species.mass;
  const double T = total_time;
  const double K = env.k_grad;
  const double hk = species.hbar_k;
  // (delta_p/hbar_k) * formula_conventional with the hbar_k cancelled
  // algebraically, plus the moment-asymmetry term; finite for hbar_k = 0.
  const double bracket =
      p0 * T / m + hk * T / (2.0 * m) + env.f0 * T * T / (2.0 * m);
  const double common = -(K * T * T * delta_p / (32.0 * m * env.hbar)) * bracket;
  const double asymmetry = a * K * T * T * T * delta_p *
                           (delta_p / 3.0 + hk / 2.0) /
                           (32.0 * m * m * env.hbar);
  return common + asymmetry;
}

double formula_hbark_zero(const Environment& env, const AtomSpecies& species,
                          double p0, double delta_p, double total_time) {
  if (!(total_time > 0.0))
    throw PhysicsError("formula_hbark_zero: total_time must be > 0");
  if (!(delta_p > 0.0))
    throw PhysicsError("formula_hbark_zero: delta_p must be > 0");
  const double a = alpha(species.mu1, species.mu2);
  const double m = species.mass;
  const double T = total_time;
  const double K = env.k_grad;
  const double bracket = p0 * T / m + env.f0 * T * T / (2.0 * m) -
                         (delta_p / m) * (a / 3.0) * T;
  return -(K * T * T / (32.0 * env.hbar)) * (delta_p / m) * bracket;
}

Misalignment misalignment(const ArmTrajectory& arm1, const ArmTrajectory& arm2,
                          const Environment& env, const AtomSpecies& species) {
  const double T = common_end_time(arm1, arm2);
  const PhaseSpacePoint& a = arm1.final_state();
  const PhaseSpacePoint& b = arm2.final_state();

  Misalignment mis;
  mis.dz = b.z - a.z;
  mis.dp = b.p - a.p;

  // One more harmonic evolution of duration T applied to the mismatch
  // vector; symplectic by construction (det = c^2 - (K/m) s^2 = 1).
  const HarmonicBasis basis = harmonic_basis(env.k_grad, species.mass, T);
  mis.dz_evolved = mis.dz * basis.c - (mis.dp / species.mass) * basis.s_over_omega;
  mis.dp_evolved = mis.dp * basis.c - env.k_grad * mis.dz * basis.s_over_omega;
  return mis;
}

std::pair<double, double> formula_misalignment(MisalignmentKind kind,
                                               const Environment& env,
                                               const AtomSpecies& species,
                                               double delta_p,
                                               double total_time) {
  const double m = species.mass;
  const double T = total_time;
  const double K = env.k_grad;
  if (kind == MisalignmentKind::butterfly)
    return {K * T * T * T * delta_p / (32.0 * m * m), 0.0};
  return {K * T * T * T * delta_p / (8.0 * m * m),
          K * T * T * delta_p / (4.0 * m)};
}

double visibility(const Misalignment& mis, const GaussianEnsemble& ensemble,
                  double hbar) {
  if (!(hbar > 0.0)) throw PhysicsError("visibility: hbar must be > 0");
  const double dz = mis.dz_evolved;
  const double dp = mis.dp_evolved;
  const double sz = ensemble.sigma_z;
  const double sp = ensemble.sigma_p;
  double exponent;
  if (ensemble.purity == Purity::pure) {
    exponent = dz * dz / (8.0 * sz * sz) + dp * dp / (8.0 * sp * sp);
  } else {
    exponent = (sz * sz * dp * dp + sp * sp * dz * dz) / (2.0 * hbar * hbar);
  }
  return std::exp(-exponent);
}

std::pair<double, double> populations(double contrast, double delta_phi) {
  if (!(contrast >= 0.0 && contrast <= 1.0))
    throw PhysicsError("populations: contrast must lie in [0, 1]");
  if (!std::isfinite(delta_phi))
    throw PhysicsError("populations: delta_phi must be finite");
  const double p1 = 0.5 * (1.0 + contrast * std::cos(delta_phi));
  return {p1, 1.0 - p1};
}

} // namespace sgb
