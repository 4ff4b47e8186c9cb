#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sgb/config.hpp"

namespace sgb {

// One evaluated point of a run or sweep. All fields are finite; emission
// serializes them with 17 significant digits (round-trip exact for doubles).
struct RunRecord {
  double sweep_value;             // swept parameter (total_time when no sweep)
  double delta_phi_total;         // [rad]
  double delta_phi_gradient;      // [rad]
  double formula_conventional;    // [rad]
  double formula_pulse;           // [rad]
  double formula_hbark_zero;      // [rad]
  double dz;                      // [m]
  double dz_evolved;              // [m]
  double dp;                      // [kg m/s]
  double dp_evolved;              // [kg m/s]
  double visibility;              // [0, 1]
  double p1;
  double p2;
};

// Evaluate a config: one record per sweep point (or a single record at the
// configured total_time when no sweep is given). Points are independent.
std::vector<RunRecord> run_config(const RunConfig& cfg);

// Schema "sgb.run.v1": a '# schema=' comment line, a mandatory header row
// naming every column with its SI unit, then one row per record; '\n' line
// endings; numbers with 17 significant digits. Identical config bytes
// produce identical output bytes.
void emit_csv(const RunConfig& cfg, std::span<const RunRecord> records,
              std::ostream& out);

// Same rows as a JSON array of objects; field names match the CSV columns.
void emit_json(const RunConfig& cfg, std::span<const RunRecord> records,
               std::ostream& out);

// Bundled figure exports (schemas sgb.fig3/4/5.v1):
//   fig3: closed-form gradient phases vs T — free-fall common term and the
//         moment-asymmetry term for alpha in {0, 3, 109}.
//   fig4: simulated finite-ramp gradient phase vs pulse-limit formula vs T
//         (fountain launch, t1 in {1 ms, 10 ms}).
//   fig5: simulated visibility vs T for butterfly and Mach-Zehnder.
void emit_fig3_csv(std::ostream& out);
void emit_fig4_csv(std::ostream& out);
void emit_fig5_csv(std::ostream& out);

// Randomized analytic-vs-oracle comparison over the advertised parameter
// domain plus symplecticity and small-gradient continuity checks.
struct ValidationReport {
  double max_rel_z = 0.0;
  double max_rel_p = 0.0;
  double max_rel_phase = 0.0;
  // Raw |det J - 1| grows like eps*cosh^2(w dt) at the domain edge (inherent
  // to rounded entries); the normalized measure divides by max(1, ||J||^2)
  // and is the gated quantity.
  double max_det_error_raw = 0.0;
  double max_det_error_normalized = 0.0;
  double max_continuity_error = 0.0;
  bool passed = false;
};

ValidationReport run_validation(std::uint64_t seed, int cases);
void print_validation(const ValidationReport& report, std::ostream& out);

// 17-significant-digit scientific serialization used by all emitters.
std::string format_double17(double value);

} // namespace sgb
