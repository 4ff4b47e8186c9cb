#include "sgb/runner.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <random>

#include "sgb/observables.hpp"
#include "sgb/presets.hpp"
#include "sgb/propagator.hpp"
#include "sgb/sequences.hpp"

namespace sgb {

std::string format_double17(double value) {
  char buf[64];
  const auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof buf, value, std::chars_format::scientific, 16);
  if (ec != std::errc{})
    throw PhysicsError("format_double17: conversion failed");
  return std::string(buf, ptr);
}

namespace {

const char* sweep_column_name(const RunConfig& cfg) {
  if (!cfg.sweep) return "T_s";
  switch (cfg.sweep->parameter) {
    case SweepSpec::Parameter::total_time: return "T_s";
    case SweepSpec::Parameter::t1: return "t1_s";
    case SweepSpec::Parameter::k_grad: return "K_N_per_m";
    case SweepSpec::Parameter::delta_p: return "delta_p_kg_m_per_s";
  }
  return "T_s";
}

constexpr const char* kRecordColumns[] = {
    "delta_phi_total_rad",   "delta_phi_gradient_rad", "formula_conventional_rad",
    "formula_pulse_rad",     "formula_hbark_zero_rad", "dz_m",
    "dz_evolved_m",          "dp_kg_m_per_s",          "dp_evolved_kg_m_per_s",
    "visibility",            "p1",                     "p2"};

std::vector<double> record_values(const RunRecord& r) {
  return {r.delta_phi_total, r.delta_phi_gradient, r.formula_conventional,
          r.formula_pulse,   r.formula_hbark_zero, r.dz,
          r.dz_evolved,      r.dp,                 r.dp_evolved,
          r.visibility,      r.p1,                 r.p2};
}

std::vector<double> sweep_points(const SweepSpec& s) {
  std::vector<double> points(static_cast<std::size_t>(s.count));
  const double n = static_cast<double>(s.count - 1);
  for (int i = 0; i < s.count; ++i) {
    const double f = static_cast<double>(i) / n;
    if (s.spacing == SweepSpec::Spacing::linear)
      points[static_cast<std::size_t>(i)] = s.start + (s.stop - s.start) * f;
    else
      points[static_cast<std::size_t>(i)] =
          std::exp(std::log(s.start) + f * (std::log(s.stop) - std::log(s.start)));
  }
  points.front() = s.start;
  points.back() = s.stop;
  return points;
}

RunRecord evaluate_point(const RunConfig& cfg, double sweep_value) {
  const AtomSpecies species(cfg.mass, cfg.mu1, cfg.mu2, cfg.hbar_k);
  const Environment env(cfg.f0, cfg.k_grad);
  const GaussianEnsemble ensemble(cfg.sigma_z, cfg.resolved_sigma_p(),
                                  cfg.purity, env.hbar);
  const double delta_p = cfg.resolved_delta_p();
  const double T = cfg.total_time;

  InterferometerSequence seq;
  double delta_p_formula = delta_p;
  switch (cfg.geometry) {
    case RunConfig::Geometry::sg_butterfly:
      seq = build_sg_butterfly(species, env, delta_p, T, cfg.t1,
                               cfg.gradient_override);
      if (cfg.gradient_override)
        delta_p_formula = (species.mu2 - species.mu1) * *cfg.gradient_override *
                              cfg.t1 + species.hbar_k;
      break;
    case RunConfig::Geometry::conventional_butterfly:
      seq = build_conventional_butterfly(species, env, T);
      delta_p_formula = species.hbar_k;
      break;
    case RunConfig::Geometry::mach_zehnder:
      seq = build_mach_zehnder(species, env, delta_p, T);
      break;
  }

  const PhaseSpacePoint initial{cfg.z0, cfg.p0, 0.0};
  const PhaseResult phases = gradient_phase(seq, species, env, initial);
  const auto [arm1, arm2] = run(seq, species, env, initial);
  const Misalignment mis = misalignment(arm1, arm2, env, species);
  const double contrast = visibility(mis, ensemble, env.hbar);
  const auto [p1, p2] = populations(contrast, phases.total);

  RunRecord rec;
  rec.sweep_value = sweep_value;
  rec.delta_phi_total = phases.total;
  rec.delta_phi_gradient = phases.gradient_part;
  rec.formula_conventional = formula_conventional(env, species, cfg.p0, T);
  rec.formula_pulse =
      formula_pulse_regime(env, species, cfg.p0, delta_p_formula, T);
  rec.formula_hbark_zero =
      formula_hbark_zero(env, species, cfg.p0, delta_p_formula, T);
  rec.dz = mis.dz;
  rec.dz_evolved = mis.dz_evolved;
  rec.dp = mis.dp;
  rec.dp_evolved = mis.dp_evolved;
  rec.visibility = contrast;
  rec.p1 = p1;
  rec.p2 = p2;

  for (double v : record_values(rec))
    if (!std::isfinite(v))
      throw PhysicsError("run produced a non-finite record field");
  return rec;
}

} // namespace

std::vector<RunRecord> run_config(const RunConfig& cfg) {
  std::vector<RunRecord> records;
  if (!cfg.sweep) {
    records.push_back(evaluate_point(cfg, cfg.total_time));
    return records;
  }

  const std::vector<double> points = sweep_points(*cfg.sweep);
  records.reserve(points.size());
  for (double v : points) {
    RunConfig point_cfg = cfg;
    switch (cfg.sweep->parameter) {
      case SweepSpec::Parameter::total_time: point_cfg.total_time = v; break;
      case SweepSpec::Parameter::t1: point_cfg.t1 = v; break;
      case SweepSpec::Parameter::k_grad: point_cfg.k_grad = v; break;
      case SweepSpec::Parameter::delta_p: point_cfg.delta_p = v; break;
    }
    records.push_back(evaluate_point(point_cfg, v));
  }
  return records;
}

void emit_csv(const RunConfig& cfg, std::span<const RunRecord> records,
              std::ostream& out) {
  out << "# schema=sgb.run.v1\n";
  out << sweep_column_name(cfg);
  for (const char* col : kRecordColumns) out << ',' << col;
  out << '\n';
  for (const RunRecord& r : records) {
    out << format_double17(r.sweep_value);
    for (double v : record_values(r)) out << ',' << format_double17(v);
    out << '\n';
  }
}

void emit_json(const RunConfig& cfg, std::span<const RunRecord> records,
               std::ostream& out) {
  out << "[\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    out << "  {\"" << sweep_column_name(cfg)
        << "\": " << format_double17(records[i].sweep_value);
    const std::vector<double> values = record_values(records[i]);
    for (std::size_t j = 0; j < values.size(); ++j)
      out << ", \"" << kRecordColumns[j] << "\": " << format_double17(values[j]);
    out << (i + 1 == records.size() ? "}\n" : "},\n");
  }
  out << "]\n";
}

void emit_fig3_csv(std::ostream& out) {
  const AtomSpecies rb = species_preset("rb87-f2");
  const AtomSpecies rydberg = species_preset("rydberg-55c-56c");
  const AtomSpecies symmetric(rb.mass, -0.5 * constants::bohr_magneton,
                              0.5 * constants::bohr_magneton, 0.0);
  const double k_grad = rb.mass * 3e-6;
  const double delta_p = rb.mass * 0.02;
  const Environment env_freefall(-rb.mass * 9.8, k_grad);
  const Environment env_plain(0.0, k_grad);

  SweepSpec grid{SweepSpec::Parameter::total_time, 0.02, 2.0, 100,
                 SweepSpec::Spacing::log};
  out << "# schema=sgb.fig3.v1\n";
  out << "T_s,dphi1_rad,dphi2_alpha0_rad,dphi2_alpha3_rad,dphi2_alpha109_rad\n";
  for (double T : sweep_points(grid)) {
    // alpha = 0 species isolates the common (free-fall) term; f0 = 0 runs
    // isolate the moment-asymmetry term.
    const double dphi1 =
        std::fabs(formula_hbark_zero(env_freefall, symmetric, 0.0, delta_p, T));
    const double a0 =
        std::fabs(formula_hbark_zero(env_plain, symmetric, 0.0, delta_p, T));
    const double a3 =
        std::fabs(formula_hbark_zero(env_plain, rb, 0.0, delta_p, T));
    const double a109 =
        std::fabs(formula_hbark_zero(env_plain, rydberg, 0.0, delta_p, T));
    out << format_double17(T) << ',' << format_double17(dphi1) << ','
        << format_double17(a0) << ',' << format_double17(a3) << ','
        << format_double17(a109) << '\n';
  }
}

void emit_fig4_csv(std::ostream& out) {
  const AtomSpecies rb = species_preset("rb87-f2");
  const double k_grad = rb.mass * 3e-6;
  const double delta_p = rb.mass * 0.02;
  const double g = 9.8;
  const Environment env(-rb.mass * g, k_grad);

  SweepSpec grid{SweepSpec::Parameter::total_time, 0.1, 2.0, 39,
                 SweepSpec::Spacing::linear};
  out << "# schema=sgb.fig4.v1\n";
  out << "T_s,dphi_pulse_rad,dphi_t1_1ms_rad,dphi_t1_10ms_rad\n";
  for (double T : sweep_points(grid)) {
    // Fountain launch: z(0) = z(T), so only the gradient terms survive.
    const double p0 = rb.mass * g * T / 2.0;
    const PhaseSpacePoint initial{0.0, p0, 0.0};
    const double pulse = formula_hbark_zero(env, rb, p0, delta_p, T);
    double finite[2];
    const double t1_values[2] = {1e-3, 1e-2};
    for (int i = 0; i < 2; ++i) {
      const InterferometerSequence seq =
          build_sg_butterfly(rb, env, delta_p, T, t1_values[i]);
      finite[i] = gradient_phase(seq, rb, env, initial).gradient_part;
    }
    out << format_double17(T) << ',' << format_double17(pulse) << ','
        << format_double17(finite[0]) << ',' << format_double17(finite[1])
        << '\n';
  }
}

void emit_fig5_csv(std::ostream& out) {
  const AtomSpecies rb = species_preset("rb87-f2");
  const double k_grad = rb.mass * 3e-6;
  const double delta_p = rb.mass * 0.02;
  const Environment env(-rb.mass * 9.8, k_grad);
  const GaussianEnsemble ensemble(200e-6, rb.mass * 0.44e-3, Purity::mixed);
  const PhaseSpacePoint initial{};

  SweepSpec grid{SweepSpec::Parameter::total_time, 0.25, 10.0, 40,
                 SweepSpec::Spacing::linear};
  out << "# schema=sgb.fig5.v1\n";
  out << "T_s,visibility_butterfly,visibility_mach_zehnder\n";
  for (double T : sweep_points(grid)) {
    const auto [b1, b2] =
        run(build_sg_butterfly(rb, env, delta_p, T, 0.0), rb, env, initial);
    const double c_butterfly =
        visibility(misalignment(b1, b2, env, rb), ensemble, env.hbar);
    const auto [m1, m2] =
        run(build_mach_zehnder(rb, env, delta_p, T), rb, env, initial);
    const double c_mz =
        visibility(misalignment(m1, m2, env, rb), ensemble, env.hbar);
    out << format_double17(T) << ',' << format_double17(c_butterfly) << ','
        << format_double17(c_mz) << '\n';
  }
}

namespace {

// Long-double reference for the basis functions. For small |u| the direct
// (c-1)/w^2 forms are cancellation-limited even in long double, so the
// reference switches to a long-double series through u^6 (truncation ~u^7,
// i.e. far below long-double eps everywhere the series is used).
void basis_reference(double k_grad, double mass, double dt, long double out[4]) {
  const long double w2 = static_cast<long double>(k_grad) / mass;
  const long double u = w2 * dt * dt;
  if (std::fabs(u) < 1e-4L) {
    const long double t = dt;
    long double c = 0.0L, s = 0.0L, ar = 0.0L, ai = 0.0L;
    long double fact[16];
    fact[0] = 1.0L;
    for (int k = 1; k < 16; ++k) fact[k] = fact[k - 1] * k;
    long double upow = 1.0L;
    for (int k = 0; k <= 6; ++k) {
      c += upow / fact[2 * k];
      s += upow / fact[2 * k + 1];
      ar += upow / fact[2 * k + 2];
      ai += upow / fact[2 * k + 3];
      upow *= u;
    }
    out[0] = c;
    out[1] = t * s;
    out[2] = t * t * ar;
    out[3] = t * t * t * ai;
    return;
  }
  const long double w = std::sqrt(std::fabs(w2));
  const long double x = w * dt;
  long double c, s;
  if (w2 > 0.0L) {
    c = std::cosh(x);
    s = std::sinh(x) / w;
  } else {
    c = std::cos(x);
    s = std::sin(x) / w;
  }
  out[0] = c;
  out[1] = s;
  out[2] = (c - 1.0L) / w2;
  out[3] = (s - dt) / w2;
}

double rel_against(double a, double b, double floor_scale) {
  const double denom =
      std::fmax(std::fmax(std::fabs(a), std::fabs(b)), floor_scale);
  return denom == 0.0 ? 0.0 : std::fabs(a - b) / denom;
}

} // namespace

ValidationReport run_validation(std::uint64_t seed, int cases) {
  if (cases < 1) throw PhysicsError("run_validation: cases must be >= 1");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> log_mass(-27.0, -24.0);
  std::uniform_real_distribution<double> log_dt(-6.0, 1.0);
  std::uniform_real_distribution<double> accel(-10.0, 10.0);

  ValidationReport rep;
  const double hbar = constants::hbar;

  for (int i = 0; i < cases; ++i) {
    const double mass = std::pow(10.0, log_mass(rng));
    const double k_over_m = unit(rng);  // [1/s^2]
    const double k_grad = k_over_m * mass;
    const double dt = std::pow(10.0, log_dt(rng));
    const double z0 = unit(rng);
    const double v0 = unit(rng);
    const double a_f = accel(rng);
    const double force = mass * a_f;
    const PhaseSpacePoint start{z0, mass * v0, 0.0};

    const SegmentResult seg = propagate_segment(start, force, k_grad, mass, dt);
    const double phase = segment_phase(start, force, k_grad, mass, dt, hbar);
    const PhaseSpacePoint ora = oracle_integrate(
        start, [force](double) { return force; }, k_grad, mass, dt, hbar);

    // Amplitude floors: free-motion scales, so near-zero crossings of the
    // trajectory do not masquerade as large relative errors.
    const double amp_z =
        std::fabs(z0) + std::fabs(v0) * dt + 0.5 * std::fabs(a_f) * dt * dt;
    const double amp_p = std::fabs(start.p) + std::fabs(force) * dt +
                         std::fabs(k_grad) * amp_z * dt;
    const double amp_phase = std::fabs(force) / (2.0 * hbar) * amp_z * dt;

    rep.max_rel_z = std::fmax(rep.max_rel_z, rel_against(seg.end.z, ora.z, amp_z));
    rep.max_rel_p = std::fmax(rep.max_rel_p, rel_against(seg.end.p, ora.p, amp_p));
    rep.max_rel_phase =
        std::fmax(rep.max_rel_phase, rel_against(phase, ora.phase, amp_phase));
    const double det_err = std::fabs(seg.jacobian.det() - 1.0);
    const double norm_sq =
        std::fmax(seg.jacobian.dz_dz0 * seg.jacobian.dz_dz0,
                  std::fabs(seg.jacobian.dz_dp0 * seg.jacobian.dp_dz0));
    rep.max_det_error_raw = std::fmax(rep.max_det_error_raw, det_err);
    rep.max_det_error_normalized = std::fmax(
        rep.max_det_error_normalized, det_err / std::fmax(1.0, norm_sq));

    // Series-branch consistency at |u| = 1e-8 with the same (mass, dt) draw.
    for (double sign : {1.0, -1.0}) {
      const double k_small = sign * 1e-8 * mass / (dt * dt);
      const HarmonicBasis basis = harmonic_basis(k_small, mass, dt);
      long double ref[4];
      basis_reference(k_small, mass, dt, ref);
      const double got[4] = {basis.c, basis.s_over_omega, basis.accel_response,
                             basis.accel_response_int};
      for (int j = 0; j < 4; ++j)
        rep.max_continuity_error = std::fmax(
            rep.max_continuity_error,
            rel_against(got[j], static_cast<double>(ref[j]), 0.0));
    }
  }

  rep.passed = rep.max_rel_z < 1e-9 && rep.max_rel_p < 1e-9 &&
               rep.max_rel_phase < 1e-9 &&
               rep.max_det_error_normalized < 1e-12 &&
               rep.max_continuity_error < 1e-10;
  return rep;
}

void print_validation(const ValidationReport& rep, std::ostream& out) {
  out << "analytic vs oracle, max relative error:\n"
      << "  position   " << format_double17(rep.max_rel_z) << '\n'
      << "  momentum   " << format_double17(rep.max_rel_p) << '\n'
      << "  phase      " << format_double17(rep.max_rel_phase) << '\n'
      << "jacobian |det - 1| max, raw:        "
      << format_double17(rep.max_det_error_raw) << '\n'
      << "jacobian |det - 1| max, normalized: "
      << format_double17(rep.max_det_error_normalized) << '\n'
      << "series-branch consistency at |u|=1e-8: "
      << format_double17(rep.max_continuity_error) << '\n'
      << (rep.passed ? "validation PASSED" : "validation FAILED") << '\n';
}

} // namespace sgb
