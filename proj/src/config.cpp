#include "mis/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <climits>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace mis {

namespace {

constexpr double kSpeedOfLight = 3.0e8;  // m/s, matching the quoted carrier
constexpr double kDegToRad = std::numbers::pi / 180.0;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

[[noreturn]] void fail(const std::string& name, int line,
                       const std::string& what) {
  throw ConfigError(name + ":" + std::to_string(line) + ": " + what);
}

double parse_double_or_fail(std::string_view text, const std::string& name,
                            int line, std::string_view key) {
  const std::string buf(text);
  char* end = nullptr;
  errno = 0;
  const double value = std::strtod(buf.c_str(), &end);
  if (end == buf.c_str() || *end != '\0' || errno == ERANGE ||
      !std::isfinite(value))
    fail(name, line, "value of '" + std::string(key) + "' is not a number: '" +
                         buf + "'");
  return value;
}

long long parse_int_or_fail(std::string_view text, const std::string& name,
                            int line, std::string_view key) {
  long long value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    fail(name, line, "value of '" + std::string(key) +
                         "' is not an integer: '" + std::string(text) + "'");
  return value;
}

std::uint64_t parse_seed_or_fail(std::string_view text, const std::string& name,
                                 int line, std::string_view key) {
  std::uint64_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    fail(name, line, "value of '" + std::string(key) +
                         "' is not an unsigned integer: '" + std::string(text) +
                         "'");
  return value;
}

std::vector<double> parse_number_list(std::string_view text,
                                      const std::string& name, int line,
                                      std::string_view key) {
  std::vector<double> values;
  std::istringstream stream{std::string(text)};
  std::string token;
  while (stream >> token)
    values.push_back(parse_double_or_fail(token, name, line, key));
  if (values.empty())
    fail(name, line, "'" + std::string(key) + "' needs at least one value");
  return values;
}

void append_number(std::string& out, std::string_view key, double value) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  out += key;
  out += '=';
  out += buf;
  out += '\n';
}

void append_number(std::string& out, std::string_view key, int value) {
  out += key;
  out += '=';
  out += std::to_string(value);
  out += '\n';
}

}  // namespace

std::string method_name(RunMethod method) {
  switch (method) {
    case RunMethod::kRalm:
      return "ralm";
    case RunMethod::kClosedForm:
      return "closed_form";
    case RunMethod::kBoth:
      return "both";
  }
  return "unknown";
}

RunMethod parse_method(const std::string& text) {
  if (text == "ralm") return RunMethod::kRalm;
  if (text == "closed-form" || text == "closed_form")
    return RunMethod::kClosedForm;
  if (text == "both") return RunMethod::kBoth;
  throw ConfigError("unknown method '" + text +
                    "' (expected ralm, closed-form, or both)");
}

std::string sweep_variable_name(SweepVariable variable) {
  switch (variable) {
    case SweepVariable::kPowerDbm:
      return "power_dbm";
    case SweepVariable::kMs2Size:
      return "ms2_size";
    case SweepVariable::kMs1Size:
      return "ms1_size";
    case SweepVariable::kTargetCount:
      return "target_count";
  }
  return "unknown";
}

void ScenarioConfig::validate() const {
  const auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError("invalid configuration: " + what);
  };
  require(geometry.rows_ms1 >= 1 && geometry.cols_ms1 >= 1,
          "fixed panel dimensions must be positive");
  require(geometry.rows_ms2 >= 1 && geometry.cols_ms2 >= 1,
          "movable panel dimensions must be positive");
  require(geometry.rows_ms2 <= geometry.rows_ms1 &&
              geometry.cols_ms2 <= geometry.cols_ms1,
          "movable panel must fit inside the fixed panel");
  require(geometry.spacing_fraction > 0.0, "spacing fraction must be positive");
  require(geometry.carrier_ghz > 0.0, "carrier frequency must be positive");
  require(scene.targets_azimuth >= 1 && scene.targets_elevation >= 1,
          "target grid needs at least one point per axis");
  require(scene.azimuth_lo_deg <= scene.azimuth_hi_deg,
          "azimuth range is reversed");
  require(scene.elevation_lo_deg <= scene.elevation_hi_deg,
          "elevation range is reversed");
  require(scene.elevation_lo_deg >= 0.0 && scene.elevation_hi_deg <= 90.0,
          "elevation range must lie in [0, 90] degrees");
  require(std::abs(scene.azimuth_lo_deg) <= 180.0 &&
              std::abs(scene.azimuth_hi_deg) <= 180.0,
          "azimuth range must lie in [-180, 180] degrees");
  require(std::isfinite(scene.echo_snr_db), "echo SNR must be finite");
  require(std::isfinite(scene.power_dbm), "power must be finite");
  require(scene.tx_antennas >= 1, "transmit antenna count must be positive");
  require(scene.source_elevation_deg >= 0.0 &&
              scene.source_elevation_deg <= 90.0,
          "source elevation must lie in [0, 90] degrees");
  try {
    solver.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid solver settings: ") + e.what());
  }
  if (run.curvature) require(*run.curvature > 0.0, "curvature must be positive");
  if (sweep) {
    require(!sweep->values.empty(), "sweep needs at least one value");
    for (double v : sweep->values)
      apply_sweep_value(*this, sweep->variable, v).validate();
  }
  require(beam_map.azimuth_points >= 1 && beam_map.elevation_points >= 1,
          "beam map grid needs at least one point per axis");
  require(beam_map.azimuth_lo_deg <= beam_map.azimuth_hi_deg &&
              beam_map.elevation_lo_deg <= beam_map.elevation_hi_deg,
          "beam map ranges are reversed");
  require(oracle.levels >= 1, "oracle needs at least one phase level");
  require(gradcheck.points >= 1, "gradient check needs at least one point");
  require(gradcheck.step > 0.0, "gradient check step must be positive");
  require(gradcheck.tolerance >= 0.0,
          "gradient check tolerance must be non-negative");
}

std::string ScenarioConfig::canonical_string() const {
  std::string out;
  out.reserve(1024);
  append_number(out, "geometry.rows_ms1", geometry.rows_ms1);
  append_number(out, "geometry.cols_ms1", geometry.cols_ms1);
  append_number(out, "geometry.rows_ms2", geometry.rows_ms2);
  append_number(out, "geometry.cols_ms2", geometry.cols_ms2);
  append_number(out, "geometry.spacing_fraction", geometry.spacing_fraction);
  append_number(out, "geometry.carrier_ghz", geometry.carrier_ghz);
  append_number(out, "scene.targets_azimuth", scene.targets_azimuth);
  append_number(out, "scene.targets_elevation", scene.targets_elevation);
  append_number(out, "scene.azimuth_lo_deg", scene.azimuth_lo_deg);
  append_number(out, "scene.azimuth_hi_deg", scene.azimuth_hi_deg);
  append_number(out, "scene.elevation_lo_deg", scene.elevation_lo_deg);
  append_number(out, "scene.elevation_hi_deg", scene.elevation_hi_deg);
  append_number(out, "scene.echo_snr_db", scene.echo_snr_db);
  append_number(out, "scene.power_dbm", scene.power_dbm);
  append_number(out, "scene.tx_antennas", scene.tx_antennas);
  append_number(out, "scene.source_azimuth_deg", scene.source_azimuth_deg);
  append_number(out, "scene.source_elevation_deg", scene.source_elevation_deg);
  append_number(out, "solver.rho0", solver.rho0);
  append_number(out, "solver.rho_growth", solver.rho_growth);
  append_number(out, "solver.violation_ratio", solver.violation_ratio);
  append_number(out, "solver.tol_shrink", solver.tol_shrink);
  append_number(out, "solver.lambda_min", solver.lambda_min);
  append_number(out, "solver.lambda_max", solver.lambda_max);
  append_number(out, "solver.rcg_tol0", solver.rcg_tol0);
  append_number(out, "solver.tol_min", solver.tol_min);
  append_number(out, "solver.step_min", solver.step_min);
  append_number(out, "solver.armijo_c1", solver.armijo_c1);
  append_number(out, "solver.backtrack", solver.backtrack);
  append_number(out, "solver.max_linesearch", solver.max_linesearch);
  append_number(out, "solver.max_inner", solver.max_inner);
  append_number(out, "solver.max_outer", solver.max_outer);
  append_number(out, "solver.restarts", solver.restarts);
  append_number(out, "run.curvature", run.curvature ? *run.curvature : 0.0);
  return out;
}

std::uint64_t ScenarioConfig::hash() const { return fnv1a64(canonical_string()); }

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

ScenarioConfig parse_config(std::string_view text, const std::string& name) {
  ScenarioConfig cfg;
  std::string section;
  int line_no = 0;
  std::istringstream stream{std::string(text)};
  std::string raw;
  while (std::getline(stream, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash_pos = line.find_first_of("#;");
        hash_pos != std::string_view::npos)
      line = line.substr(0, hash_pos);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        fail(name, line_no, "unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      static const char* known[] = {"geometry", "scene",  "solver",
                                    "run",      "sweep",  "beam_map",
                                    "oracle",   "gradcheck"};
      if (std::find(std::begin(known), std::end(known), section) ==
          std::end(known))
        fail(name, line_no, "unknown section [" + section + "]");
      if (section == "sweep" && !cfg.sweep) cfg.sweep.emplace();
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      fail(name, line_no, "expected 'key = value'");
    const std::string key{trim(line.substr(0, eq))};
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) fail(name, line_no, "empty key");
    if (value.empty()) fail(name, line_no, "empty value for '" + key + "'");
    if (section.empty())
      fail(name, line_no, "key '" + key + "' appears before any section");

    const auto num = [&] {
      return parse_double_or_fail(value, name, line_no, key);
    };
    const auto integer = [&] {
      const long long v = parse_int_or_fail(value, name, line_no, key);
      if (v < INT_MIN || v > INT_MAX) fail(name, line_no, "'" + key + "' overflows");
      return static_cast<int>(v);
    };

    if (section == "geometry") {
      if (key == "rows_ms1") cfg.geometry.rows_ms1 = integer();
      else if (key == "cols_ms1") cfg.geometry.cols_ms1 = integer();
      else if (key == "rows_ms2") cfg.geometry.rows_ms2 = integer();
      else if (key == "cols_ms2") cfg.geometry.cols_ms2 = integer();
      else if (key == "spacing_fraction") cfg.geometry.spacing_fraction = num();
      else if (key == "carrier_ghz") cfg.geometry.carrier_ghz = num();
      else fail(name, line_no, "unknown key '" + key + "' in [geometry]");
    } else if (section == "scene") {
      if (key == "targets_azimuth") cfg.scene.targets_azimuth = integer();
      else if (key == "targets_elevation") cfg.scene.targets_elevation = integer();
      else if (key == "azimuth_lo_deg") cfg.scene.azimuth_lo_deg = num();
      else if (key == "azimuth_hi_deg") cfg.scene.azimuth_hi_deg = num();
      else if (key == "elevation_lo_deg") cfg.scene.elevation_lo_deg = num();
      else if (key == "elevation_hi_deg") cfg.scene.elevation_hi_deg = num();
      else if (key == "echo_snr_db") cfg.scene.echo_snr_db = num();
      else if (key == "power_dbm") cfg.scene.power_dbm = num();
      else if (key == "tx_antennas") cfg.scene.tx_antennas = integer();
      else if (key == "source_azimuth_deg") cfg.scene.source_azimuth_deg = num();
      else if (key == "source_elevation_deg")
        cfg.scene.source_elevation_deg = num();
      else fail(name, line_no, "unknown key '" + key + "' in [scene]");
    } else if (section == "solver") {
      if (key == "rho0") cfg.solver.rho0 = num();
      else if (key == "rho_growth") cfg.solver.rho_growth = num();
      else if (key == "violation_ratio") cfg.solver.violation_ratio = num();
      else if (key == "tol_shrink") cfg.solver.tol_shrink = num();
      else if (key == "lambda_min") cfg.solver.lambda_min = num();
      else if (key == "lambda_max") cfg.solver.lambda_max = num();
      else if (key == "rcg_tol0") cfg.solver.rcg_tol0 = num();
      else if (key == "tol_min") cfg.solver.tol_min = num();
      else if (key == "step_min") cfg.solver.step_min = num();
      else if (key == "armijo_c1") cfg.solver.armijo_c1 = num();
      else if (key == "backtrack") cfg.solver.backtrack = num();
      else if (key == "max_linesearch") cfg.solver.max_linesearch = integer();
      else if (key == "max_inner") cfg.solver.max_inner = integer();
      else if (key == "max_outer") cfg.solver.max_outer = integer();
      else if (key == "restarts") cfg.solver.restarts = integer();
      else fail(name, line_no, "unknown key '" + key + "' in [solver]");
    } else if (section == "run") {
      if (key == "seed")
        cfg.run.seed = parse_seed_or_fail(value, name, line_no, key);
      else if (key == "method") {
        try {
          cfg.run.method = parse_method(std::string(value));
        } catch (const ConfigError& e) {
          fail(name, line_no, e.what());
        }
      } else if (key == "out_dir")
        cfg.run.out_dir = std::string(value);
      else if (key == "curvature")
        cfg.run.curvature = num();
      else fail(name, line_no, "unknown key '" + key + "' in [run]");
    } else if (section == "sweep") {
      if (key == "variable") {
        const std::string v(value);
        if (v == "power_dbm") cfg.sweep->variable = SweepVariable::kPowerDbm;
        else if (v == "ms2_size") cfg.sweep->variable = SweepVariable::kMs2Size;
        else if (v == "ms1_size") cfg.sweep->variable = SweepVariable::kMs1Size;
        else if (v == "target_count")
          cfg.sweep->variable = SweepVariable::kTargetCount;
        else
          fail(name, line_no, "unknown sweep variable '" + v + "'");
      } else if (key == "values") {
        cfg.sweep->values = parse_number_list(value, name, line_no, key);
      } else {
        fail(name, line_no, "unknown key '" + key + "' in [sweep]");
      }
    } else if (section == "beam_map") {
      if (key == "azimuth_points") cfg.beam_map.azimuth_points = integer();
      else if (key == "elevation_points") cfg.beam_map.elevation_points = integer();
      else if (key == "azimuth_lo_deg") cfg.beam_map.azimuth_lo_deg = num();
      else if (key == "azimuth_hi_deg") cfg.beam_map.azimuth_hi_deg = num();
      else if (key == "elevation_lo_deg") cfg.beam_map.elevation_lo_deg = num();
      else if (key == "elevation_hi_deg") cfg.beam_map.elevation_hi_deg = num();
      else if (key == "design_path") cfg.beam_map.design_path = std::string(value);
      else fail(name, line_no, "unknown key '" + key + "' in [beam_map]");
    } else if (section == "oracle") {
      if (key == "levels") cfg.oracle.levels = integer();
      else fail(name, line_no, "unknown key '" + key + "' in [oracle]");
    } else if (section == "gradcheck") {
      if (key == "points") cfg.gradcheck.points = integer();
      else if (key == "step") cfg.gradcheck.step = num();
      else if (key == "tolerance") cfg.gradcheck.tolerance = num();
      else fail(name, line_no, "unknown key '" + key + "' in [gradcheck]");
    }
  }
  cfg.solver.seed = cfg.run.seed;
  cfg.validate();
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

std::vector<double> grid_values(double lo, double hi, int count) {
  if (count < 1) throw ConfigError("grid needs at least one point");
  if (count == 1) return {0.5 * (lo + hi)};
  std::vector<double> values(count);
  for (int i = 0; i < count; ++i)
    values[i] = lo + (hi - lo) * static_cast<double>(i) / (count - 1);
  return values;
}

std::pair<int, int> balanced_grid(int count) {
  if (count < 1) throw ConfigError("target count must be positive");
  int best = 1;
  for (int a = 1; a * a <= count; ++a)
    if (count % a == 0) best = a;
  return {best, count / best};
}

double config_wavelength(const ScenarioConfig& cfg) {
  return kSpeedOfLight / (cfg.geometry.carrier_ghz * 1.0e9);
}

MisGeometry make_geometry(const ScenarioConfig& cfg) {
  const double lambda = config_wavelength(cfg);
  try {
    return MisGeometry(cfg.geometry.rows_ms1, cfg.geometry.cols_ms1,
                       cfg.geometry.rows_ms2, cfg.geometry.cols_ms2,
                       cfg.geometry.spacing_fraction * lambda, lambda);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid geometry: ") + e.what());
  }
}

TargetScene make_scene(const ScenarioConfig& cfg) {
  TargetScene scene;
  const double beta = std::sqrt(from_db(cfg.scene.echo_snr_db));
  const std::vector<double> az = grid_values(
      cfg.scene.azimuth_lo_deg, cfg.scene.azimuth_hi_deg, cfg.scene.targets_azimuth);
  const std::vector<double> el =
      grid_values(cfg.scene.elevation_lo_deg, cfg.scene.elevation_hi_deg,
                  cfg.scene.targets_elevation);
  for (double e : el)
    for (double a : az)
      scene.targets.push_back(
          Target{{a * kDegToRad, e * kDegToRad}, beta, 1.0});
  scene.source = {cfg.scene.source_azimuth_deg * kDegToRad,
                  cfg.scene.source_elevation_deg * kDegToRad};
  scene.tx_power = dbm_to_watts(cfg.scene.power_dbm);
  scene.tx_antennas = cfg.scene.tx_antennas;
  scene.validate();
  return scene;
}

RalmConfig make_solver(const ScenarioConfig& cfg) {
  RalmConfig solver = cfg.solver;
  solver.seed = cfg.run.seed;
  try {
    solver.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid solver settings: ") + e.what());
  }
  return solver;
}

ScenarioConfig apply_sweep_value(const ScenarioConfig& base,
                                 SweepVariable variable, double value) {
  ScenarioConfig derived = base;
  derived.sweep.reset();
  const auto as_count = [&](const char* what) {
    const double rounded = std::nearbyint(value);
    if (!(value > 0.0) || std::abs(value - rounded) > 1e-9)
      throw ConfigError(std::string("swept ") + what +
                        " must be a positive integer, got " +
                        std::to_string(value));
    return static_cast<int>(rounded);
  };
  switch (variable) {
    case SweepVariable::kPowerDbm:
      derived.scene.power_dbm = value;
      break;
    case SweepVariable::kMs2Size: {
      const int n = as_count("ms2_size");
      derived.geometry.rows_ms2 = n;
      derived.geometry.cols_ms2 = n;
      break;
    }
    case SweepVariable::kMs1Size: {
      const int m = as_count("ms1_size");
      derived.geometry.rows_ms1 = m;
      derived.geometry.cols_ms1 = m;
      break;
    }
    case SweepVariable::kTargetCount: {
      const auto [az, el] = balanced_grid(as_count("target_count"));
      derived.scene.targets_azimuth = az;
      derived.scene.targets_elevation = el;
      break;
    }
  }
  return derived;
}

}  // namespace mis
