#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "sgb/model.hpp"

namespace sgb {

// Thrown for malformed or inconsistent run configurations; messages carry the
// offending line number where one exists.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parameter sweep: `count` points from start to stop inclusive, linear or
// logarithmic spacing, each point evaluated independently.
struct SweepSpec {
  enum class Parameter { total_time, t1, k_grad, delta_p };
  enum class Spacing { linear, log };

  Parameter parameter = Parameter::total_time;
  double start = 0.0;
  double stop = 0.0;
  int count = 2;
  Spacing spacing = Spacing::linear;
};

// Everything needed to reproduce one run or sweep. Defaults describe the
// rubidium scenario; see the key reference in the README.
struct RunConfig {
  enum class Geometry { sg_butterfly, conventional_butterfly, mach_zehnder };

  Geometry geometry = Geometry::sg_butterfly;

  // species
  double mass = 1.42e-25;                                 // [kg]
  double mu1 = 0.5 * constants::bohr_magneton;            // [J/T]
  double mu2 = constants::bohr_magneton;                  // [J/T]
  double hbar_k = 0.0;                                    // [kg m/s]

  // environment
  double f0 = 0.0;      // [N]
  double k_grad = 0.0;  // [N/m]

  // initial conditions
  double z0 = 0.0;  // [m]
  double p0 = 0.0;  // [kg m/s]

  // sequence knobs
  std::optional<double> delta_p;  // [kg m/s]; default mass * 0.02 m/s
  double t1 = 0.0;                // [s]
  std::optional<double> gradient_override;  // [T/m]
  double total_time = 1.0;        // [s]

  // detection ensemble
  double sigma_z = 200e-6;          // [m]
  std::optional<double> sigma_p;    // [kg m/s]; default mass * 0.44e-3 m/s
  Purity purity = Purity::mixed;

  std::optional<SweepSpec> sweep;

  double resolved_delta_p() const { return delta_p ? *delta_p : mass * 0.02; }
  double resolved_sigma_p() const {
    return sigma_p ? *sigma_p : mass * 0.44e-3;
  }
};

// Parse the key = value format (one pair per line, '#' comments, blank lines
// ignored). An optional `preset = NAME` line must come before any other key
// and seeds the config from the named preset; later keys override. Unknown or
// duplicate keys are hard errors naming the line.
RunConfig parse_run_config(std::string_view text);

} // namespace sgb
