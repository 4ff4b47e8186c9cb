#include "sgb/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <set>
#include <vector>

#include "sgb/presets.hpp"

namespace sgb {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw ConfigError("config line " + std::to_string(line) + ": " + what);
}

double parse_number(int line, std::string_view key, std::string_view value) {
  const std::string v(value);
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end != v.c_str() + v.size() || v.empty())
    fail(line, "key '" + std::string(key) + "' expects a number, got '" + v + "'");
  if (!std::isfinite(x))
    fail(line, "key '" + std::string(key) + "' must be finite");
  return x;
}

struct KeyValue {
  int line;
  std::string key;
  std::string value;
};

} // namespace

RunConfig parse_run_config(std::string_view text) {
  std::vector<KeyValue> pairs;
  std::set<std::string> seen;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    ++line_no;
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;

    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      fail(line_no, "expected 'key = value', got '" + std::string(line) + "'");
    const std::string key{trim(line.substr(0, eq))};
    const std::string value{trim(line.substr(eq + 1))};
    if (key.empty()) fail(line_no, "empty key");
    if (value.empty()) fail(line_no, "empty value for key '" + key + "'");
    if (!seen.insert(key).second)
      fail(line_no, "duplicate key '" + key + "'");
    pairs.push_back({line_no, key, value});
  }

  RunConfig cfg;
  SweepSpec sweep;
  bool sweep_requested = false;
  std::optional<double> pending_delta_v;
  bool saw_delta_p = false;

  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& [line, key, value] = pairs[i];

    if (key == "preset") {
      if (i != 0)
        fail(line, "'preset' must be the first key in the file");
      try {
        cfg = config_preset(value);
      } catch (const PhysicsError& e) {
        fail(line, e.what());
      }
      if (cfg.sweep) {
        sweep = *cfg.sweep;
        sweep_requested = true;
      }
    } else if (key == "geometry") {
      if (value == "sg_butterfly")
        cfg.geometry = RunConfig::Geometry::sg_butterfly;
      else if (value == "conventional_butterfly")
        cfg.geometry = RunConfig::Geometry::conventional_butterfly;
      else if (value == "mach_zehnder")
        cfg.geometry = RunConfig::Geometry::mach_zehnder;
      else
        fail(line, "unknown geometry '" + value + "'");
    } else if (key == "species") {
      try {
        const AtomSpecies s = species_preset(value);
        cfg.mass = s.mass;
        cfg.mu1 = s.mu1;
        cfg.mu2 = s.mu2;
        cfg.hbar_k = s.hbar_k;
      } catch (const PhysicsError& e) {
        fail(line, e.what());
      }
    } else if (key == "mass") {
      cfg.mass = parse_number(line, key, value);
    } else if (key == "mu1") {
      cfg.mu1 = parse_number(line, key, value);
    } else if (key == "mu2") {
      cfg.mu2 = parse_number(line, key, value);
    } else if (key == "hbar_k") {
      cfg.hbar_k = parse_number(line, key, value);
    } else if (key == "f0") {
      cfg.f0 = parse_number(line, key, value);
    } else if (key == "k_grad") {
      cfg.k_grad = parse_number(line, key, value);
    } else if (key == "z0") {
      cfg.z0 = parse_number(line, key, value);
    } else if (key == "p0") {
      cfg.p0 = parse_number(line, key, value);
    } else if (key == "delta_p") {
      cfg.delta_p = parse_number(line, key, value);
      saw_delta_p = true;
    } else if (key == "delta_v") {
      pending_delta_v = parse_number(line, key, value);
    } else if (key == "t1") {
      cfg.t1 = parse_number(line, key, value);
    } else if (key == "gradient_override") {
      cfg.gradient_override = parse_number(line, key, value);
    } else if (key == "T") {
      cfg.total_time = parse_number(line, key, value);
    } else if (key == "sigma_z") {
      cfg.sigma_z = parse_number(line, key, value);
    } else if (key == "sigma_p") {
      cfg.sigma_p = parse_number(line, key, value);
    } else if (key == "purity") {
      if (value == "pure")
        cfg.purity = Purity::pure;
      else if (value == "mixed")
        cfg.purity = Purity::mixed;
      else
        fail(line, "purity must be 'pure' or 'mixed'");
    } else if (key == "sweep_parameter") {
      sweep_requested = true;
      if (value == "T")
        sweep.parameter = SweepSpec::Parameter::total_time;
      else if (value == "t1")
        sweep.parameter = SweepSpec::Parameter::t1;
      else if (value == "K")
        sweep.parameter = SweepSpec::Parameter::k_grad;
      else if (value == "delta_p")
        sweep.parameter = SweepSpec::Parameter::delta_p;
      else
        fail(line, "sweep_parameter must be one of T, t1, K, delta_p");
    } else if (key == "sweep_start") {
      sweep_requested = true;
      sweep.start = parse_number(line, key, value);
    } else if (key == "sweep_stop") {
      sweep_requested = true;
      sweep.stop = parse_number(line, key, value);
    } else if (key == "sweep_count") {
      sweep_requested = true;
      const double c = parse_number(line, key, value);
      if (c != std::floor(c) || c < 2.0 || c > 1e7)
        fail(line, "sweep_count must be an integer >= 2");
      sweep.count = static_cast<int>(c);
    } else if (key == "sweep_spacing") {
      sweep_requested = true;
      if (value == "linear")
        sweep.spacing = SweepSpec::Spacing::linear;
      else if (value == "log")
        sweep.spacing = SweepSpec::Spacing::log;
      else
        fail(line, "sweep_spacing must be 'linear' or 'log'");
    } else {
      fail(line, "unknown key '" + key + "'");
    }
  }

  if (pending_delta_v) {
    if (saw_delta_p)
      throw ConfigError("config: give either delta_p or delta_v, not both");
    cfg.delta_p = cfg.mass * *pending_delta_v;
  }

  if (sweep_requested) {
    if (sweep.count < 2) throw ConfigError("config: sweep_count must be >= 2");
    if (!(sweep.start < sweep.stop))
      throw ConfigError("config: sweep_start must be < sweep_stop");
    if (sweep.spacing == SweepSpec::Spacing::log && !(sweep.start > 0.0))
      throw ConfigError("config: log spacing requires sweep_start > 0");
    cfg.sweep = sweep;
  }

  return cfg;
}

} // namespace sgb
