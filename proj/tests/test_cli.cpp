#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "sgb/config.hpp"
#include "sgb/constants.hpp"
#include "sgb/observables.hpp"
#include "sgb/presets.hpp"
#include "sgb/runner.hpp"

using namespace sgb;

namespace {

namespace fs = std::filesystem;

// Scratch directory unique to this test binary invocation.
struct TempDir {
  fs::path path;

  TempDir() {
    static std::atomic<int> counter{0};
    path = fs::temp_directory_path() /
           ("sgb_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  REQUIRE(out.good());
  out << text;
}

std::string quoted(const fs::path& p) { return "\"" + p.string() + "\""; }

// Runs the installed CLI binary; returns its exit status.
int run_cli(const std::string& args, const fs::path& stdout_path = {},
            const fs::path& stderr_path = {}) {
  std::string cmd = std::string("\"") + SGB_CLI_PATH + "\" " + args;
  if (!stdout_path.empty()) cmd += " > " + quoted(stdout_path);
  if (!stderr_path.empty()) cmd += " 2> " + quoted(stderr_path);
  const int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  REQUIRE(WIFEXITED(rc));
  return WEXITSTATUS(rc);
}

std::string csv_of(const RunConfig& cfg, const std::vector<RunRecord>& records) {
  std::ostringstream out;
  emit_csv(cfg, records, out);
  return out.str();
}

std::size_t count_char(const std::string& s, char c) {
  std::size_t n = 0;
  for (char x : s)
    if (x == c) ++n;
  return n;
}

} // namespace

TEST_CASE("format_double17: canonical scientific form") {
  CHECK(format_double17(1.0) == "1.0000000000000000e+00");
  CHECK(format_double17(0.0) == "0.0000000000000000e+00");
  CHECK(format_double17(-0.5) == "-5.0000000000000000e-01");
}

TEST_CASE("format_double17: round-trips every double exactly") {
  std::vector<double> values = {1.0, -1.0, 3.141592653589793, 1e-300, -1e300,
                                5.0494427351077210e-2, 1.42e-25};
  // A few awkward bit patterns.
  for (int i = 1; i <= 50; ++i)
    values.push_back(std::ldexp(1.0 + 1.0 / i, 7 * i % 60 - 30));
  for (const double v : values) {
    const std::string s = format_double17(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
}

TEST_CASE("parse_run_config: empty text yields the documented defaults") {
  const RunConfig cfg = parse_run_config("");
  CHECK(cfg.geometry == RunConfig::Geometry::sg_butterfly);
  CHECK(cfg.mass == 1.42e-25);
  CHECK(cfg.mu1 == 0.5 * constants::bohr_magneton);
  CHECK(cfg.mu2 == constants::bohr_magneton);
  CHECK(cfg.hbar_k == 0.0);
  CHECK(cfg.f0 == 0.0);
  CHECK(cfg.k_grad == 0.0);
  CHECK(cfg.t1 == 0.0);
  CHECK(cfg.total_time == 1.0);
  CHECK(cfg.purity == Purity::mixed);
  CHECK_FALSE(cfg.sweep.has_value());
  CHECK_FALSE(cfg.gradient_override.has_value());
  CHECK(cfg.resolved_delta_p() == doctest::Approx(1.42e-25 * 0.02));
  CHECK(cfg.resolved_sigma_p() == doctest::Approx(1.42e-25 * 0.44e-3));
}

TEST_CASE("parse_run_config: full key coverage") {
  const RunConfig cfg = parse_run_config(
      "# a comment line\n"
      "geometry = mach_zehnder\n"
      "mass = 2e-25\n"
      "mu1 = 1e-24   # trailing comment\n"
      "mu2 = 3e-24\n"
      "hbar_k = 1e-28\n"
      "f0 = -1.96e-24\n"
      "k_grad = 4.26e-31\n"
      "z0 = 1e-4\n"
      "p0 = 2e-27\n"
      "delta_p = 5e-27\n"
      "t1 = 1e-3\n"
      "gradient_override = 0.34\n"
      "T = 2.5\n"
      "sigma_z = 1e-4\n"
      "sigma_p = 1e-28\n"
      "purity = pure\n"
      "\n"
      "sweep_parameter = K\n"
      "sweep_start = 1e-32\n"
      "sweep_stop = 1e-30\n"
      "sweep_count = 11\n"
      "sweep_spacing = log\n");

  CHECK(cfg.geometry == RunConfig::Geometry::mach_zehnder);
  CHECK(cfg.mass == 2e-25);
  CHECK(cfg.mu1 == 1e-24);
  CHECK(cfg.mu2 == 3e-24);
  CHECK(cfg.hbar_k == 1e-28);
  CHECK(cfg.f0 == -1.96e-24);
  CHECK(cfg.k_grad == 4.26e-31);
  CHECK(cfg.z0 == 1e-4);
  CHECK(cfg.p0 == 2e-27);
  CHECK(cfg.resolved_delta_p() == 5e-27);
  CHECK(cfg.t1 == 1e-3);
  CHECK(cfg.gradient_override == 0.34);
  CHECK(cfg.total_time == 2.5);
  CHECK(cfg.sigma_z == 1e-4);
  CHECK(cfg.resolved_sigma_p() == 1e-28);
  CHECK(cfg.purity == Purity::pure);
  REQUIRE(cfg.sweep.has_value());
  CHECK(cfg.sweep->parameter == SweepSpec::Parameter::k_grad);
  CHECK(cfg.sweep->start == 1e-32);
  CHECK(cfg.sweep->stop == 1e-30);
  CHECK(cfg.sweep->count == 11);
  CHECK(cfg.sweep->spacing == SweepSpec::Spacing::log);
}

TEST_CASE("parse_run_config: delta_v converts with the final mass") {
  // delta_v is resolved after all keys, so it uses the mass given below it.
  const RunConfig cfg = parse_run_config("delta_v = 0.02\nmass = 2e-25\n");
  CHECK(cfg.resolved_delta_p() == doctest::Approx(4e-27).epsilon(1e-15));
}

TEST_CASE("parse_run_config: errors carry the offending line number") {
  const auto message_of = [](const char* text) {
    try {
      parse_run_config(text);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("(no error)");
  };

  CHECK(message_of("T = 1\nbogus_key = 2\n").find("line 2") !=
        std::string::npos);
  CHECK(message_of("T = 1\nbogus_key = 2\n").find("bogus_key") !=
        std::string::npos);
  CHECK(message_of("T = 1\nT = 2\n").find("duplicate") != std::string::npos);
  CHECK(message_of("just some words\n").find("line 1") != std::string::npos);
  CHECK(message_of("T = abc\n").find("number") != std::string::npos);
  CHECK(message_of("T =\n").find("empty value") != std::string::npos);
  CHECK(message_of("T = 1\npreset = fig3-default\n").find("first") !=
        std::string::npos);
  CHECK(message_of("preset = nope\n").find("line 1") != std::string::npos);
  CHECK(message_of("geometry = ring\n").find("geometry") != std::string::npos);
  CHECK(message_of("purity = fuzzy\n").find("purity") != std::string::npos);
  CHECK(message_of("sweep_parameter = mass\n").find("sweep_parameter") !=
        std::string::npos);
  CHECK(message_of("sweep_count = 2.5\n").find("integer") != std::string::npos);
}

TEST_CASE("parse_run_config: cross-key validation") {
  CHECK_THROWS_AS(parse_run_config("delta_p = 1e-27\ndelta_v = 0.02\n"),
                  ConfigError);
  CHECK_THROWS_AS(
      parse_run_config("sweep_parameter = T\nsweep_start = 2\nsweep_stop = 1\n"
                       "sweep_count = 5\n"),
      ConfigError);
  CHECK_THROWS_AS(
      parse_run_config("sweep_parameter = T\nsweep_start = 0\nsweep_stop = 1\n"
                       "sweep_count = 5\nsweep_spacing = log\n"),
      ConfigError);
  CHECK_THROWS_AS(parse_run_config("sweep_count = 1\n"), ConfigError);
}

TEST_CASE("presets: species constants") {
  const AtomSpecies rb = species_preset("rb87-f2");
  CHECK(rb.mass == 1.42e-25);
  CHECK(rb.mu1 == 0.5 * constants::bohr_magneton);
  CHECK(rb.mu2 == constants::bohr_magneton);
  CHECK(rb.hbar_k == 0.0);
  CHECK(alpha(rb.mu1, rb.mu2) == 3.0);

  const AtomSpecies ryd = species_preset("rydberg-55c-56c");
  CHECK(ryd.mu1 == 54.0 * constants::bohr_magneton);
  CHECK(ryd.mu2 == 55.0 * constants::bohr_magneton);
  CHECK(alpha(ryd.mu1, ryd.mu2) == doctest::Approx(109.0).epsilon(1e-13));

  CHECK_THROWS_AS(species_preset("cesium"), PhysicsError);
  CHECK(species_preset_names().size() == 2);
}

TEST_CASE("presets: scenario configs parse and carry the advertised sweeps") {
  const RunConfig fig3 = config_preset("fig3-default");
  CHECK(fig3.geometry == RunConfig::Geometry::sg_butterfly);
  CHECK(fig3.k_grad == doctest::Approx(1.42e-25 * 3e-6).epsilon(1e-15));
  CHECK(fig3.f0 == 0.0);
  CHECK(fig3.t1 == 0.0);
  REQUIRE(fig3.sweep.has_value());
  CHECK(fig3.sweep->spacing == SweepSpec::Spacing::log);
  CHECK(fig3.sweep->start == 0.02);
  CHECK(fig3.sweep->stop == 2.0);
  CHECK(fig3.sweep->count == 100);

  const RunConfig fig4 = config_preset("fig4-default");
  CHECK(fig4.t1 == 1e-3);
  REQUIRE(fig4.sweep.has_value());
  CHECK(fig4.sweep->spacing == SweepSpec::Spacing::linear);
  CHECK(fig4.sweep->count == 39);

  const RunConfig fig5 = config_preset("fig5-default");
  CHECK(fig5.f0 == doctest::Approx(-1.42e-25 * 9.8).epsilon(1e-15));
  CHECK(fig5.geometry == RunConfig::Geometry::sg_butterfly);

  const RunConfig fig5mz = config_preset("fig5-mz");
  CHECK(fig5mz.geometry == RunConfig::Geometry::mach_zehnder);
  CHECK(fig5mz.f0 == fig5.f0);

  CHECK_THROWS_AS(config_preset("fig6-default"), PhysicsError);
  CHECK(config_preset_names().size() == 4);

  // Preset seeding via the config text, with a later key overriding.
  const RunConfig tweaked =
      parse_run_config("preset = fig3-default\nsweep_count = 5\n");
  REQUIRE(tweaked.sweep.has_value());
  CHECK(tweaked.sweep->count == 5);
  CHECK(tweaked.sweep->start == 0.02);
}

TEST_CASE("run_config: single point when no sweep is given") {
  RunConfig cfg = parse_run_config("T = 0.5\nk_grad = 4.26e-31\n");
  const std::vector<RunRecord> records = run_config(cfg);
  REQUIRE(records.size() == 1);
  CHECK(records[0].sweep_value == 0.5);
  CHECK(std::isfinite(records[0].delta_phi_total));
  CHECK(records[0].p1 + records[0].p2 == 1.0);
}

TEST_CASE("run_config: zero gradient is a null control") {
  const RunConfig cfg = parse_run_config(
      "k_grad = 0\nsweep_parameter = T\nsweep_start = 0.5\nsweep_stop = 1.5\n"
      "sweep_count = 3\n");
  for (const RunRecord& r : run_config(cfg)) {
    CHECK(r.delta_phi_gradient == 0.0);
    CHECK(r.visibility == 1.0);
    CHECK(r.dz == 0.0);  // arms reclose exactly without a gradient
  }
}

TEST_CASE("run_config: sweep endpoints are exact and rows match the formula") {
  RunConfig cfg = config_preset("fig3-default");
  cfg.sweep->count = 7;  // thin the grid; rows stay log-spaced 0.02 .. 2
  const std::vector<RunRecord> records = run_config(cfg);
  REQUIRE(records.size() == 7);
  CHECK(records.front().sweep_value == 0.02);
  CHECK(records.back().sweep_value == 2.0);

  const AtomSpecies species(cfg.mass, cfg.mu1, cfg.mu2, cfg.hbar_k);
  const double a = alpha(cfg.mu1, cfg.mu2);
  const double dp = cfg.resolved_delta_p();
  for (const RunRecord& r : records) {
    CAPTURE(r.sweep_value);
    const double T = r.sweep_value;
    // Rest frame, no uniform force: only the moment-asymmetry term remains,
    // alpha K T^3 delta_p^2 / (96 hbar m^2).
    const double literal = a * cfg.k_grad * T * T * T * dp * dp /
                           (96.0 * constants::hbar * cfg.mass * cfg.mass);
    CHECK(r.formula_hbark_zero == doctest::Approx(literal).epsilon(1e-12));
    CHECK(r.delta_phi_gradient ==
          doctest::Approx(r.formula_hbark_zero).epsilon(5e-3));
    CHECK(r.visibility > 0.0);
    CHECK(r.visibility <= 1.0);
  }
  (void)species;
}

TEST_CASE("run_config: sweeps over t1, K and delta_p bind the right knob") {
  const RunConfig over_t1 = parse_run_config(
      "k_grad = 4.26e-31\nT = 1\nsweep_parameter = t1\nsweep_start = 1e-4\n"
      "sweep_stop = 1e-3\nsweep_count = 3\n");
  const std::vector<RunRecord> rt1 = run_config(over_t1);
  REQUIRE(rt1.size() == 3);
  CHECK(rt1.front().sweep_value == 1e-4);
  // Finite ramps deviate from the pulse-limit formula more as t1 grows.
  const double d0 = std::fabs(rt1.front().delta_phi_gradient -
                              rt1.front().formula_hbark_zero);
  const double d2 = std::fabs(rt1.back().delta_phi_gradient -
                              rt1.back().formula_hbark_zero);
  CHECK(d2 > d0);

  const RunConfig over_k = parse_run_config(
      "sweep_parameter = K\nsweep_start = 1e-32\nsweep_stop = 1e-31\n"
      "sweep_count = 2\n");
  const std::vector<RunRecord> rk = run_config(over_k);
  CHECK(rk[1].delta_phi_gradient / rk[0].delta_phi_gradient ==
        doctest::Approx(10.0).epsilon(1e-3));

  const RunConfig over_dp = parse_run_config(
      "k_grad = 4.26e-31\nsweep_parameter = delta_p\nsweep_start = 1e-27\n"
      "sweep_stop = 4e-27\nsweep_count = 2\n");
  const std::vector<RunRecord> rdp = run_config(over_dp);
  // Moment-asymmetry term scales as delta_p^2 at rest.
  CHECK(rdp[1].delta_phi_gradient / rdp[0].delta_phi_gradient ==
        doctest::Approx(16.0).epsilon(1e-2));
}

TEST_CASE("run_config: geometry selection feeds the matching formulas") {
  const RunConfig conv = parse_run_config(
      "geometry = conventional_butterfly\nhbar_k = 1.6978606253700002e-27\n"
      "k_grad = 4.26e-31\nT = 1\n");
  const std::vector<RunRecord> rc = run_config(conv);
  REQUIRE(rc.size() == 1);
  CHECK(rc[0].delta_phi_gradient ==
        doctest::Approx(rc[0].formula_conventional).epsilon(1e-3));

  const RunConfig mz = parse_run_config(
      "geometry = mach_zehnder\nk_grad = 4.26e-31\nT = 3\n");
  const std::vector<RunRecord> rm = run_config(mz);
  const auto [dz_est, dp_est] = formula_misalignment(
      MisalignmentKind::mach_zehnder, Environment(0.0, 4.26e-31),
      AtomSpecies(1.42e-25, 0.5 * constants::bohr_magneton,
                  constants::bohr_magneton),
      1.42e-25 * 0.02, 3.0);
  CHECK(rm[0].dz == doctest::Approx(dz_est).epsilon(1e-3));
  CHECK(rm[0].dp == doctest::Approx(dp_est).epsilon(1e-3));
}

TEST_CASE("run_config: gradient override reinterprets the formula transfer") {
  const RunConfig cfg = parse_run_config(
      "k_grad = 4.26e-31\nt1 = 1e-3\ngradient_override = 0.34\nT = 1\n");
  const std::vector<RunRecord> records = run_config(cfg);
  REQUIRE(records.size() == 1);

  const AtomSpecies species(cfg.mass, cfg.mu1, cfg.mu2, cfg.hbar_k);
  const Environment env(cfg.f0, cfg.k_grad);
  const double dp_eff = (cfg.mu2 - cfg.mu1) * 0.34 * 1e-3;
  CHECK(records[0].formula_hbark_zero ==
        doctest::Approx(formula_hbark_zero(env, species, 0.0, dp_eff, 1.0))
            .epsilon(1e-12));
}

TEST_CASE("emit_csv: schema line, header and row shape") {
  const RunConfig cfg = parse_run_config(
      "k_grad = 4.26e-31\nsweep_parameter = T\nsweep_start = 0.5\n"
      "sweep_stop = 1.0\nsweep_count = 3\n");
  const std::vector<RunRecord> records = run_config(cfg);
  const std::string csv = csv_of(cfg, records);

  std::istringstream lines(csv);
  std::string line;
  REQUIRE(std::getline(lines, line));
  CHECK(line == "# schema=sgb.run.v1");
  REQUIRE(std::getline(lines, line));
  CHECK(line ==
        "T_s,delta_phi_total_rad,delta_phi_gradient_rad,"
        "formula_conventional_rad,formula_pulse_rad,formula_hbark_zero_rad,"
        "dz_m,dz_evolved_m,dp_kg_m_per_s,dp_evolved_kg_m_per_s,visibility,"
        "p1,p2");
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    CHECK(count_char(line, ',') == 12);
    // Every field parses as a double.
    std::istringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) {
      char* end = nullptr;
      std::strtod(field.c_str(), &end);
      CHECK(end == field.c_str() + field.size());
    }
  }
  CHECK(rows == 3);

  // The sweep column renames with the swept parameter.
  const RunConfig kcfg = parse_run_config(
      "sweep_parameter = K\nsweep_start = 1e-32\nsweep_stop = 1e-31\n"
      "sweep_count = 2\n");
  const std::string kcsv = csv_of(kcfg, run_config(kcfg));
  CHECK(kcsv.find("K_N_per_m,") != std::string::npos);
}

TEST_CASE("emit_json: array of objects mirroring the CSV columns") {
  const RunConfig cfg = parse_run_config(
      "k_grad = 4.26e-31\nsweep_parameter = T\nsweep_start = 0.5\n"
      "sweep_stop = 1.0\nsweep_count = 3\n");
  const std::vector<RunRecord> records = run_config(cfg);
  std::ostringstream out;
  emit_json(cfg, records, out);
  const std::string json = out.str();

  CHECK(json.rfind("[\n", 0) == 0);
  CHECK(json.substr(json.size() - 2) == "]\n");
  CHECK(count_char(json, '{') == 3);
  CHECK(count_char(json, '}') == 3);
  CHECK(json.find("  {\"T_s\": 5.0000000000000000e-01, "
                  "\"delta_phi_total_rad\": ") != std::string::npos);
  CHECK(json.find("\"p2\": ") != std::string::npos);

  // Identical values to the CSV: spot-check the first record's total phase.
  const std::string total = format_double17(records[0].delta_phi_total);
  CHECK(json.find(total) != std::string::npos);
  CHECK(csv_of(cfg, records).find(total) != std::string::npos);
}

TEST_CASE("emission is deterministic") {
  const RunConfig cfg = config_preset("fig4-default");
  RunConfig thin = cfg;
  thin.sweep->count = 4;
  const std::string once = csv_of(thin, run_config(thin));
  const std::string twice = csv_of(thin, run_config(thin));
  CHECK(once == twice);
}

TEST_CASE("cli: simulate writes csv to a file and to stdout identically") {
  TempDir tmp;
  const fs::path config = tmp.path / "run.cfg";
  write_file(config, "k_grad = 4.26e-31\nT = 0.5\n");

  const fs::path out_file = tmp.path / "out.csv";
  const fs::path out_stdout = tmp.path / "stdout.csv";
  CHECK(run_cli("simulate --config " + quoted(config) + " --out " +
                quoted(out_file)) == 0);
  CHECK(run_cli("simulate --config " + quoted(config), out_stdout) == 0);

  const std::string bytes = read_file(out_file);
  CHECK(bytes.rfind("# schema=sgb.run.v1\n", 0) == 0);
  CHECK(bytes == read_file(out_stdout));
}

TEST_CASE("cli: json format selection") {
  TempDir tmp;
  const fs::path config = tmp.path / "run.cfg";
  write_file(config, "k_grad = 4.26e-31\nT = 0.5\n");
  const fs::path out = tmp.path / "out.json";
  CHECK(run_cli("simulate --config " + quoted(config) + " --format json",
                out) == 0);
  const std::string bytes = read_file(out);
  CHECK(bytes.rfind("[\n", 0) == 0);
  CHECK(bytes.find("\"delta_phi_total_rad\"") != std::string::npos);
}

TEST_CASE("cli: exit code 1 for config errors") {
  TempDir tmp;
  const fs::path config = tmp.path / "bad.cfg";
  write_file(config, "bogus = 1\n");
  const fs::path err = tmp.path / "err.txt";
  CHECK(run_cli("simulate --config " + quoted(config), tmp.path / "o.csv",
                err) == 1);
  CHECK(read_file(err).find("config line 1") != std::string::npos);

  // Missing config file is also a config error.
  CHECK(run_cli("simulate --config " + quoted(tmp.path / "absent.cfg"),
                tmp.path / "o2.csv", tmp.path / "e2.txt") == 1);
  // Missing required option / unknown subcommand are CLI parse errors.
  CHECK(run_cli("simulate", tmp.path / "o3.csv", tmp.path / "e3.txt") == 1);
  CHECK(run_cli("frobnicate", tmp.path / "o4.csv", tmp.path / "e4.txt") == 1);
}

TEST_CASE("cli: exit code 2 for physics errors") {
  TempDir tmp;
  const fs::path config = tmp.path / "bad_physics.cfg";
  write_file(config, "mass = -1\n");
  const fs::path err = tmp.path / "err.txt";
  CHECK(run_cli("simulate --config " + quoted(config), tmp.path / "o.csv",
                err) == 2);
  CHECK(read_file(err).find("error") != std::string::npos);
}

TEST_CASE("cli: validate subcommand passes on a short run") {
  TempDir tmp;
  const fs::path out = tmp.path / "report.txt";
  CHECK(run_cli("validate --cases 25 --seed 7", out) == 0);
  const std::string report = read_file(out);
  CHECK(report.find("validation PASSED") != std::string::npos);
  CHECK(report.find("normalized") != std::string::npos);
}
