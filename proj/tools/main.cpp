// sgb — Stern-Gerlach butterfly interferometer simulator.
//
// Subcommands:
//   simulate  run a key=value config file, emit CSV or JSON records
//   fig3      closed-form gradient phases vs T (moment-asymmetry scan)
//   fig4      finite-ramp vs pulse-limit gradient phase vs T
//   fig5      butterfly vs Mach-Zehnder visibility vs T
//   validate  randomized analytic-vs-oracle comparison
//
// Exit codes: 0 success, 1 configuration/usage error, 2 physics/validation
// error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "sgb/config.hpp"
#include "sgb/runner.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw sgb::ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& bytes) {
  if (path.empty()) {
    std::cout << bytes;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw sgb::ConfigError("cannot open output file '" + path + "'");
  out << bytes;
  if (!out)
    throw sgb::ConfigError("failed writing output file '" + path + "'");
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stern-Gerlach butterfly interferometer simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string format = "csv";
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Run a config file and emit one record per sweep point");
  simulate->add_option("--config", config_path, "key = value config file")
      ->required();
  simulate->add_option("--out", out_path, "output path (default: stdout)");
  simulate->add_option("--format", format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  std::string fig3_out, fig4_out, fig5_out;
  CLI::App* fig3 = app.add_subcommand(
      "fig3", "Gradient-phase formulas vs T for alpha in {0, 3, 109}");
  fig3->add_option("--out", fig3_out, "output path (default: stdout)");
  CLI::App* fig4 = app.add_subcommand(
      "fig4", "Finite-ramp vs pulse-limit gradient phase vs T");
  fig4->add_option("--out", fig4_out, "output path (default: stdout)");
  CLI::App* fig5 = app.add_subcommand(
      "fig5", "Butterfly vs Mach-Zehnder visibility vs T");
  fig5->add_option("--out", fig5_out, "output path (default: stdout)");

  std::uint64_t seed = 20230817;
  int cases = 1000;
  CLI::App* validate = app.add_subcommand(
      "validate", "Randomized analytic-vs-oracle cross-check");
  validate->add_option("--seed", seed, "RNG seed");
  validate->add_option("--cases", cases, "number of random segments")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*simulate) {
      const sgb::RunConfig cfg = sgb::parse_run_config(read_file(config_path));
      const std::vector<sgb::RunRecord> records = sgb::run_config(cfg);
      std::ostringstream buf;
      if (format == "json")
        sgb::emit_json(cfg, records, buf);
      else
        sgb::emit_csv(cfg, records, buf);
      write_output(out_path, buf.str());
    } else if (*fig3 || *fig4 || *fig5) {
      std::ostringstream buf;
      std::string path;
      if (*fig3) {
        sgb::emit_fig3_csv(buf);
        path = fig3_out;
      } else if (*fig4) {
        sgb::emit_fig4_csv(buf);
        path = fig4_out;
      } else {
        sgb::emit_fig5_csv(buf);
        path = fig5_out;
      }
      write_output(path, buf.str());
    } else if (*validate) {
      const sgb::ValidationReport report = sgb::run_validation(seed, cases);
      sgb::print_validation(report, std::cout);
      if (!report.passed) return 2;
    }
  } catch (const sgb::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const sgb::PhysicsError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
