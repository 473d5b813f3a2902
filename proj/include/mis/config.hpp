#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mis/echo_model.hpp"
#include "mis/geometry.hpp"
#include "mis/ralm.hpp"

namespace mis {

/// Raised for unreadable, malformed, or out-of-range configuration input.
/// Messages carry the file name and line number where applicable.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

enum class RunMethod { kRalm, kClosedForm, kBoth };

std::string method_name(RunMethod method);
RunMethod parse_method(const std::string& text);

/// Panel dimensions and carrier. Spacing is given as a fraction of the
/// wavelength so the same file scales with the carrier.
struct GeometryConfig {
  int rows_ms1 = 20;
  int cols_ms1 = 20;
  int rows_ms2 = 16;
  int cols_ms2 = 16;
  double spacing_fraction = 1.0 / 3.0;
  double carrier_ghz = 12.0;
};

/// Target grid and link budget. Targets sit on an inclusive uniform grid of
/// targets_azimuth x targets_elevation directions; a single point along an
/// axis collapses to the interval midpoint.
struct SceneConfig {
  int targets_azimuth = 2;
  int targets_elevation = 2;
  double azimuth_lo_deg = 0.0;
  double azimuth_hi_deg = 90.0;
  double elevation_lo_deg = 30.0;
  double elevation_hi_deg = 70.0;
  double echo_snr_db = -73.88;
  double power_dbm = 30.0;
  int tx_antennas = 1;
  double source_azimuth_deg = 0.0;
  double source_elevation_deg = 0.0;
};

struct RunConfig {
  std::uint64_t seed = 1;
  RunMethod method = RunMethod::kRalm;
  std::string out_dir = ".";
  std::optional<double> curvature;  // closed-form override
};

enum class SweepVariable { kPowerDbm, kMs2Size, kMs1Size, kTargetCount };

std::string sweep_variable_name(SweepVariable variable);

struct SweepSection {
  SweepVariable variable = SweepVariable::kPowerDbm;
  std::vector<double> values;
};

struct BeamMapConfig {
  int azimuth_points = 181;
  int elevation_points = 91;
  double azimuth_lo_deg = -90.0;
  double azimuth_hi_deg = 90.0;
  double elevation_lo_deg = 0.0;
  double elevation_hi_deg = 90.0;
  std::string design_path;  // optional: reuse a stored report's design
};

struct OracleConfig {
  int levels = 16;
};

struct GradCheckConfig {
  int points = 20;
  double step = 1e-6;
  double tolerance = 1e-5;
};

/// One experiment description: every section is optional in the file and
/// defaults to the reference setup (12 GHz carrier, third-wavelength spacing,
/// 20x20 over 16x16 panels, a 2x2 target grid, 30 dBm, -73.88 dB echo SNR).
struct ScenarioConfig {
  GeometryConfig geometry;
  SceneConfig scene;
  RalmConfig solver;
  RunConfig run;
  std::optional<SweepSection> sweep;
  BeamMapConfig beam_map;
  OracleConfig oracle;
  GradCheckConfig gradcheck;

  void validate() const;

  /// Stable serialization of the physics-affecting fields (geometry, scene,
  /// solver, curvature). Seed, method, and output paths are excluded: they are
  /// reported alongside the hash, not inside it.
  std::string canonical_string() const;
  std::uint64_t hash() const;
};

/// 64-bit FNV-1a over raw bytes.
std::uint64_t fnv1a64(std::string_view bytes);

ScenarioConfig parse_config(std::string_view text, const std::string& name);
ScenarioConfig load_config(const std::string& path);

/// Inclusive uniform grid; a single point collapses to the midpoint.
std::vector<double> grid_values(double lo, double hi, int count);

/// Near-square factorization count = azimuth * elevation with
/// azimuth <= elevation (4 -> 2x2, 6 -> 2x3, 8 -> 2x4, 9 -> 3x3).
std::pair<int, int> balanced_grid(int count);

double config_wavelength(const ScenarioConfig& cfg);
MisGeometry make_geometry(const ScenarioConfig& cfg);
TargetScene make_scene(const ScenarioConfig& cfg);
RalmConfig make_solver(const ScenarioConfig& cfg);

/// Copy of `base` with one swept knob replaced. Sizes and counts must be
/// positive integers.
ScenarioConfig apply_sweep_value(const ScenarioConfig& base,
                                 SweepVariable variable, double value);

}  // namespace mis
