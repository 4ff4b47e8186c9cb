#pragma once

#include <utility>

#include "sgb/model.hpp"
#include "sgb/sequences.hpp"

namespace sgb {

// Interferometer phase difference split into the part caused by the force
// gradient and the part that survives at k_grad = 0. total is exactly
// gradient_part + k_independent_part by construction.
struct PhaseResult {
  double total;
  double gradient_part;
  double k_independent_part;
};

// Output-port wavepacket mismatch at measurement time: the raw differences
// (dz, dp) between the arms and the same vector propagated through one more
// harmonic evolution of duration T (the "evolved" transform used by the
// visibility; symplectic, det = 1).
struct Misalignment {
  double dz;
  double dp;
  double dz_evolved;
  double dp_evolved;
};

// delta_phi = phase2 - phase1 + (z1 p2 - z2 p1)/(2 hbar), evaluated at the
// common end time of the two trajectories. Antisymmetric under swapping arms.
double phase_difference(const ArmTrajectory& arm1, const ArmTrajectory& arm2,
                        double hbar);

// Runs the sequence under env and under env with k_grad = 0 from the same
// initial state and returns the phase decomposition.
PhaseResult gradient_phase(const InterferometerSequence& seq,
                           const AtomSpecies& species, const Environment& env,
                           const PhaseSpacePoint& initial);

// Closed-form gradient phase of the conventional (laser-kick) butterfly:
//   -(K T^2 k / 32 m) (p0 T/m + hbar k T/2m + F0 T^2/2m),  k = hbar_k/hbar.
double formula_conventional(const Environment& env, const AtomSpecies& species,
                            double p0, double total_time);

// Closed-form gradient phase of the SG butterfly in the pulse regime with
// laser recoil hbar_k and momentum transfer delta_p; its hbar_k -> 0 limit
// equals formula_hbark_zero identically.
double formula_pulse_regime(const Environment& env, const AtomSpecies& species,
                            double p0, double delta_p, double total_time);

// Pulse-regime gradient phase for purely magnetic splitting (hbar_k = 0):
//   -(K T^2 / 32 hbar)(delta_p/m)[p0 T/m + F0 T^2/2m - (delta_p/m)(alpha/3) T].
double formula_hbark_zero(const Environment& env, const AtomSpecies& species,
                          double p0, double delta_p, double total_time);

// Raw and evolved arm mismatch at the common end time.
Misalignment misalignment(const ArmTrajectory& arm1, const ArmTrajectory& arm2,
                          const Environment& env, const AtomSpecies& species);

enum class MisalignmentKind { butterfly, mach_zehnder };

// First-order (in K) mismatch estimates for the pulse-regime geometries:
//   butterfly:    dz = K T^3 delta_p / 32 m^2,  dp ~ 0
//   mach_zehnder: dz = K T^3 delta_p / 8 m^2,   dp = K T^2 delta_p / 4 m.
std::pair<double, double> formula_misalignment(MisalignmentKind kind,
                                               const Environment& env,
                                               const AtomSpecies& species,
                                               double delta_p,
                                               double total_time);

// Interference contrast of a Gaussian ensemble given the evolved mismatch:
//   pure:  exp(-dz'^2/8 sigma_z^2 - dp'^2/8 sigma_p^2)
//   mixed: exp(-(sigma_z^2 dp'^2 + sigma_p^2 dz'^2)/2 hbar^2).
double visibility(const Misalignment& mis, const GaussianEnsemble& ensemble,
                  double hbar);

// Detection probabilities (P1, P2) = ((1 +- C cos(delta_phi))/2. P1 + P2 == 1
// exactly. Throws if C is outside [0, 1].
std::pair<double, double> populations(double contrast, double delta_phi);

} // namespace sgb
