#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mis/closed_form.hpp"
#include "mis/config.hpp"
#include "mis/echo_model.hpp"
#include "mis/ralm.hpp"

namespace mis {

/// Raised when the exhaustive oracle is asked for an instance beyond its
/// enumeration bounds (fixed panel above 4 elements, movable panel above 1,
/// or more than 16 phase levels).
class OracleSizeError : public std::runtime_error {
 public:
  explicit OracleSizeError(const std::string& what)
      : std::runtime_error(what) {}
};

/// One method's outcome on one scenario. Wall time is informational only and
/// never reaches the deterministic output files.
struct RunResult {
  RunMethod method = RunMethod::kRalm;
  PhaseDesign design;
  Schedule schedule;
  double min_sinr_db = 0.0;
  RVec sinr_db;
  double wall_seconds = 0.0;
};

struct RunArtifacts {
  std::vector<RunResult> results;
  std::vector<std::string> files;
};

/// Executes the configured method(s) and writes JSON reports plus per-target
/// SINR CSVs into out_dir. With method=both a delta summary is added.
RunArtifacts run_scenario(const ScenarioConfig& cfg, const std::string& out_dir);

struct SweepRow {
  double value = 0.0;
  RunMethod method = RunMethod::kRalm;
  double min_sinr_db = 0.0;
  std::uint64_t seed = 0;
};

struct SweepOutcome {
  std::vector<SweepRow> rows;  // sorted by swept value
  std::vector<std::string> files;
  bool complete = true;
  std::string failure;  // first failure when incomplete
};

/// Runs the sweep in the base config over up to `workers` concurrent points.
/// Each point is an isolated deterministic job; one CSV per method is written
/// at the end. A failing point stops dispatch, keeps the completed rows, and
/// drops a partial-results marker file.
SweepOutcome run_sweep(const ScenarioConfig& base, int workers,
                       const std::string& out_dir);

struct BeamMapArtifacts {
  std::vector<std::string> files;
};

/// Writes one gain-map CSV per scheduled pattern over the configured angular
/// grid, plus a per-target annotation CSV. The design comes from the stored
/// report at beam_map.design_path when given, otherwise it is computed fresh
/// with the configured method(s).
BeamMapArtifacts run_beam_map(const ScenarioConfig& cfg,
                              const std::string& out_dir);

struct GradCheckReport {
  int points = 0;
  double step = 0.0;
  double tolerance = 0.0;
  double max_rel_error = 0.0;
  bool pass = false;
};

/// Central finite differences of the augmented Lagrangian against the ambient
/// analytic gradient on random interior points; writes gradcheck.json.
GradCheckReport run_gradcheck(const ScenarioConfig& cfg,
                              const std::string& out_dir);

struct OracleReport {
  double oracle_min_sinr_db = 0.0;
  double ralm_min_sinr_db = 0.0;
  double gap_db = 0.0;  // ralm minus oracle
  int levels = 0;
  std::uint64_t combinations = 0;
  PhaseDesign oracle_design;
  Schedule oracle_schedule;
};

/// Exhaustive max-min search over quantized phases (first fixed-panel element
/// pinned to zero phase; the invariance is exact) and all schedules, then the
/// solver's gap against it; writes oracle.json.
OracleReport run_oracle(const ScenarioConfig& cfg, const std::string& out_dir);

/// Shortest exact decimal for CSV cells ("%.17g").
std::string format_double(double value);

/// Reads phi/theta/schedule back from a stored report.
struct StoredDesign {
  PhaseDesign design;
  Schedule schedule;
  std::string method;
};
StoredDesign load_design(const std::string& path);

}  // namespace mis
