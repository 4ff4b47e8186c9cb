#pragma once

#include <stdexcept>
#include <string>

#include "sgb/constants.hpp"

namespace sgb {

// Thrown when an input violates a physics-level precondition (bad mass,
// degenerate magnetic moments, impossible sequence geometry, ...).
class PhysicsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One arm's state: position z [m], momentum p [kg m/s] along the z axis, and
// the accumulated action phase [rad].
struct PhaseSpacePoint {
  double z = 0.0;
  double p = 0.0;
  double phase = 0.0;
};

// The two interferometer arms. By convention arm2 receives the opening kick.
enum class ArmId { arm1, arm2 };

// An atomic species prepared in two internal states with distinct magnetic
// moments mu1, mu2 [J/T]. hbar_k [kg m/s] is the photon recoil of the
// beam-splitting laser (zero for purely magnetic splitting).
// Values are immutable after construction.
struct AtomSpecies {
  double mass;    // [kg]
  double mu1;     // moment of the state riding arm1 [J/T]
  double mu2;     // moment of the state riding arm2 [J/T]
  double hbar_k;  // laser recoil momentum [kg m/s], >= 0

  AtomSpecies(double mass, double mu1, double mu2, double hbar_k = 0.0);

  double moment(ArmId arm) const { return arm == ArmId::arm1 ? mu1 : mu2; }
};

// External field environment along z: V(z) = -f0*z - k_grad*z^2/2, i.e. a
// uniform force f0 [N] plus a linear force gradient k_grad [N/m] (k_grad > 0
// is anti-trapping, k_grad < 0 trapping). hbar is carried here so the whole
// pipeline can run in scaled units in tests.
struct Environment {
  double f0 = 0.0;
  double k_grad = 0.0;
  double hbar = constants::hbar;

  Environment() = default;
  Environment(double f0, double k_grad, double hbar = constants::hbar);

  // sqrt(|k_grad|/m): harmonic angular frequency for the species [1/s].
  double omega(const AtomSpecies& species) const;
  // k_grad/m: signed squared frequency [1/s^2].
  double omega_sq_signed(const AtomSpecies& species) const;

  Environment with_k_grad(double k) const;
};

enum class Purity { pure, mixed };

// Gaussian phase-space distribution of the atomic source. For a pure state
// the widths must satisfy the minimum-uncertainty bound.
struct GaussianEnsemble {
  double sigma_z;  // position spread [m]
  double sigma_p;  // momentum spread [kg m/s]
  Purity purity;

  GaussianEnsemble(double sigma_z, double sigma_p, Purity purity,
                   double hbar = constants::hbar);
};

// Moment-asymmetry prefactor (mu1 + mu2)/(mu2 - mu1). Dimensionless,
// scale-invariant, antisymmetric under swapping the moments.
// Throws PhysicsError when mu1 == mu2.
double alpha(double mu1, double mu2);

// Force on one arm inside a field segment with the given gradient [T/m]:
// f0 + mu_arm * gradient. The gradient here is the magnetic-field gradient of
// the segment, distinct from env.k_grad (which acts on both arms equally).
double arm_force(const AtomSpecies& species, const Environment& env, ArmId arm,
                 double gradient);

} // namespace sgb
