#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mis/echo_model.hpp"
#include "mis/geometry.hpp"

namespace mis {

/// Requested displacement lies outside the angular coverage of the curvature.
struct OutOfCoverageError : std::runtime_error {
  explicit OutOfCoverageError(const std::string& what)
      : std::runtime_error(what) {}
};

/// The position lattice has no freedom along some axis (U_r or U_c below 2).
struct DegenerateLatticeError : std::runtime_error {
  explicit DegenerateLatticeError(const std::string& what)
      : std::runtime_error(what) {}
};

/// Every grid point of a resolution query was singular; no bound exists.
struct NoResolutionBoundError : std::runtime_error {
  explicit NoResolutionBoundError(const std::string& what)
      : std::runtime_error(what) {}
};

/// Map an angle to the representative in [0, 2*pi).
double wrap_phase(double radians);

/// One-based overlap offset serving as the zero-displacement origin of a
/// quadratic design. It is a coordinate reference and may lie outside the
/// physical placement range when a scene's displacements are one-sided.
struct ReferenceOffset {
  int row = 1;
  int col = 1;
};

/// Default reference: MS2 centered on MS1 (the lower-left of the two central
/// offsets when the count along an axis is even).
ReferenceOffset centered_reference(const MisGeometry& geom);

/// Parameter bag of the quadratic design: the curvature, the per-element
/// compensation of the illuminating wavefront, and the displacement lattice
/// limits (Delta x along rows, Delta y along columns).
struct QuadraticTemplate {
  double curvature = 0.0;  // A, radians per square meter, > 0
  RVec phase_offset;       // per MS1 element, radians in [0, 2*pi)
  double dx_max = 0.0;     // (shift_rows - 1) * spacing
  double dy_max = 0.0;     // (shift_cols - 1) * spacing
  double step_x = 0.0;     // lattice step = element spacing
  double step_y = 0.0;
};

QuadraticTemplate quadratic_template(const MisGeometry& geom, double curvature,
                                     const Direction& incident);

/// Pre-designed phases of both panels, evaluated on aperture coordinates
/// centered on MS1. MS1 elements carry the negative quadratic plus the
/// wavefront compensation; MS2 elements carry the positive quadratic at their
/// reference placement, so sliding MS2 by (dx, dy) leaves an exactly linear
/// composite phase ramp of slope -2A(dx, dy) across the covered window.
PhaseDesign quadratic_phases(
    const MisGeometry& geom, double curvature, const Direction& incident,
    std::optional<ReferenceOffset> reference = std::nullopt);

struct Displacement {
  double dx = 0.0;  // meters along rows
  double dy = 0.0;  // meters along columns
};

/// Position shift that steers the beam onto `target`:
/// dx = (omega/2A) sin(el) cos(az), dy = (omega/2A) sin(el) sin(az).
Displacement steering_displacement(double curvature, const MisGeometry& geom,
                                   const Direction& target);

/// Inverse of the steering law. Zero displacement maps to boresight with
/// azimuth 0 by convention. Displacements beyond the reachable set (arcsin
/// argument above 1) raise OutOfCoverageError.
Direction recover_angles(double curvature, const MisGeometry& geom, double dx,
                         double dy);

/// Smallest curvature that keeps every listed direction reachable within the
/// displacement bounds. A boresight-only set yields 0.
double coverage_curvature(const std::vector<Direction>& targets, double dx_max,
                          double dy_max, double omega);

/// Largest curvature that keeps one lattice step finer than the requested
/// angular tolerances over the listed directions. Directions on the singular
/// lines (elevation 0 or pi/2) and zero-denominator terms are skipped; if
/// nothing remains, NoResolutionBoundError.
double resolution_curvature(const std::vector<Direction>& targets,
                            double step_x, double step_y, double tol_azimuth,
                            double tol_elevation, double omega);

/// Resolve the curvature to operate at: the resolution bound when coverage
/// permits, otherwise the coverage bound; with no bounds computed, the
/// lattice-based default pi/(lambda*d) * max{1/(U_r-1), 1/(U_c-1)}.
double choose_curvature(std::optional<double> a_cov,
                        std::optional<double> a_res, const MisGeometry& geom);

/// Output of the heuristic designer: the phases, the per-target pattern
/// schedule, and the raw steering data behind it.
struct ClosedFormDesign {
  PhaseDesign design;
  Schedule schedule;
  double curvature = 0.0;
  ReferenceOffset reference;
  std::vector<Displacement> displacement;  // continuous law, per target
  std::vector<int> offset_rows;            // chosen u_r, one-based
  std::vector<int> offset_cols;            // chosen u_c, one-based
  std::vector<std::uint8_t> clamped;       // offset hit the lattice boundary
};

/// Full heuristic design: pick the curvature (given or lattice default), place
/// the zero-displacement reference so the quantized displacements fit the
/// lattice (balancing leftover slack, clamping only when the spread exceeds
/// it), and schedule each target onto its quantized offset. Deterministic.
ClosedFormDesign closed_form_design(const TargetScene& scene,
                                    const MisGeometry& geom,
                                    std::optional<double> curvature =
                                        std::nullopt);

}  // namespace mis
