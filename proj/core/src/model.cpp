#include "sgb/model.hpp"

#include <cmath>

namespace sgb {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw PhysicsError(what);
}

} // namespace

AtomSpecies::AtomSpecies(double mass_, double mu1_, double mu2_, double hbar_k_)
    : mass(mass_), mu1(mu1_), mu2(mu2_), hbar_k(hbar_k_) {
  require(std::isfinite(mass) && mass > 0.0,
          "AtomSpecies: mass must be finite and > 0");
  require(std::isfinite(mu1) && std::isfinite(mu2),
          "AtomSpecies: magnetic moments must be finite");
  require(std::isfinite(hbar_k) && hbar_k >= 0.0,
          "AtomSpecies: hbar_k must be finite and >= 0");
}

Environment::Environment(double f0_, double k_grad_, double hbar_)
    : f0(f0_), k_grad(k_grad_), hbar(hbar_) {
  if (!std::isfinite(f0) || !std::isfinite(k_grad))
    throw PhysicsError("Environment: f0 and k_grad must be finite");
  if (!std::isfinite(hbar) || hbar <= 0.0)
    throw PhysicsError("Environment: hbar must be finite and > 0");
}

double Environment::omega(const AtomSpecies& species) const {
  return std::sqrt(std::fabs(k_grad) / species.mass);
}

double Environment::omega_sq_signed(const AtomSpecies& species) const {
  return k_grad / species.mass;
}

Environment Environment::with_k_grad(double k) const {
  return Environment(f0, k, hbar);
}

GaussianEnsemble::GaussianEnsemble(double sigma_z_, double sigma_p_,
                                   Purity purity_, double hbar)
    : sigma_z(sigma_z_), sigma_p(sigma_p_), purity(purity_) {
  require(std::isfinite(sigma_z) && sigma_z > 0.0,
          "GaussianEnsemble: sigma_z must be finite and > 0");
  require(std::isfinite(sigma_p) && sigma_p > 0.0,
          "GaussianEnsemble: sigma_p must be finite and > 0");
  if (purity == Purity::pure && sigma_z * sigma_p < 0.5 * hbar)
    throw PhysicsError(
        "GaussianEnsemble: pure state requires sigma_z*sigma_p >= hbar/2");
}

double alpha(double mu1, double mu2) {
  if (mu1 == mu2)
    throw PhysicsError("alpha: degenerate magnetic moments (mu1 == mu2)");
  return (mu1 + mu2) / (mu2 - mu1);
}

double arm_force(const AtomSpecies& species, const Environment& env, ArmId arm,
                 double gradient) {
  return env.f0 + species.moment(arm) * gradient;
}

} // namespace sgb
