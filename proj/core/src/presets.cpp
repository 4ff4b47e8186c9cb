#include "sgb/presets.hpp"

#include <string>

namespace sgb {

namespace {

// Shared scenario numbers: Rb-scale atom in a weak anti-trapping gradient.
constexpr double kMass = 1.42e-25;              // [kg]
constexpr double kGamma = 3e-6;                 // K/m [1/s^2]
constexpr double kKGrad = kMass * kGamma;       // [N/m]
constexpr double kGravity = 9.8;                // [m/s^2]
constexpr double kDeltaV = 0.02;                // splitting velocity [m/s]
constexpr double kSigmaZ = 200e-6;              // [m]
constexpr double kSigmaV = 0.44e-3;             // sigma_p / mass [m/s]

RunConfig scenario_base() {
  RunConfig cfg;
  cfg.geometry = RunConfig::Geometry::sg_butterfly;
  const AtomSpecies rb = species_preset("rb87-f2");
  cfg.mass = rb.mass;
  cfg.mu1 = rb.mu1;
  cfg.mu2 = rb.mu2;
  cfg.hbar_k = rb.hbar_k;
  cfg.f0 = 0.0;
  cfg.k_grad = kKGrad;
  cfg.z0 = 0.0;
  cfg.p0 = 0.0;
  cfg.delta_p = kMass * kDeltaV;
  cfg.t1 = 0.0;
  cfg.total_time = 1.0;
  cfg.sigma_z = kSigmaZ;
  cfg.sigma_p = kMass * kSigmaV;
  cfg.purity = Purity::mixed;
  return cfg;
}

} // namespace

AtomSpecies species_preset(std::string_view name) {
  if (name == "rb87-f2")
    return AtomSpecies(kMass, 0.5 * constants::bohr_magneton,
                       constants::bohr_magneton, 0.0);
  if (name == "rydberg-55c-56c")
    return AtomSpecies(kMass, 54.0 * constants::bohr_magneton,
                       55.0 * constants::bohr_magneton, 0.0);
  throw PhysicsError("unknown species preset '" + std::string(name) + "'");
}

RunConfig config_preset(std::string_view name) {
  if (name == "fig3-default") {
    RunConfig cfg = scenario_base();
    cfg.sweep = SweepSpec{SweepSpec::Parameter::total_time, 0.02, 2.0, 100,
                          SweepSpec::Spacing::log};
    return cfg;
  }
  if (name == "fig4-default") {
    RunConfig cfg = scenario_base();
    cfg.t1 = 1e-3;
    cfg.sweep = SweepSpec{SweepSpec::Parameter::total_time, 0.1, 2.0, 39,
                          SweepSpec::Spacing::linear};
    return cfg;
  }
  if (name == "fig5-default" || name == "fig5-mz") {
    RunConfig cfg = scenario_base();
    if (name == "fig5-mz") cfg.geometry = RunConfig::Geometry::mach_zehnder;
    cfg.f0 = -kMass * kGravity;
    cfg.sweep = SweepSpec{SweepSpec::Parameter::total_time, 0.25, 10.0, 40,
                          SweepSpec::Spacing::linear};
    return cfg;
  }
  throw PhysicsError("unknown config preset '" + std::string(name) + "'");
}

std::vector<std::string_view> species_preset_names() {
  return {"rb87-f2", "rydberg-55c-56c"};
}

std::vector<std::string_view> config_preset_names() {
  return {"fig3-default", "fig4-default", "fig5-default", "fig5-mz"};
}

} // namespace sgb
