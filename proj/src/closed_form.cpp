#include "mis/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace mis {
namespace {

void require(bool cond, const char* what) {
  if (!cond) throw std::invalid_argument(what);
}

/// Nearest integer with half-way cases rounded toward the smaller value.
int quantize_steps(double steps) {
  return static_cast<int>(std::ceil(steps - 0.5));
}

struct AxisPlacement {
  int reference = 1;
  bool overflow = false;
};

/// Place the zero-displacement origin on one lattice axis. When the quantized
/// span fits, the band floats so the leftover slack splits evenly (extra slot
/// above); otherwise the band is centered and the ends will clamp.
AxisPlacement place_axis(const std::vector<int>& steps, int count) {
  const auto [lo_it, hi_it] = std::minmax_element(steps.begin(), steps.end());
  const int lo = *lo_it;
  const int hi = *hi_it;
  const int span = hi - lo;
  AxisPlacement placement;
  if (span <= count - 1) {
    placement.reference = 1 - lo + (count - 1 - span) / 2;
  } else {
    placement.reference = static_cast<int>(
        std::llround(0.5 * (count + 1) - 0.5 * (lo + hi)));
    placement.overflow = true;
  }
  return placement;
}

}  // namespace

double wrap_phase(double radians) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double w = std::fmod(radians, two_pi);
  if (w < 0.0) w += two_pi;
  if (w == two_pi) w = 0.0;
  return w;
}

ReferenceOffset centered_reference(const MisGeometry& geom) {
  return {(geom.shift_rows() + 1) / 2, (geom.shift_cols() + 1) / 2};
}

QuadraticTemplate quadratic_template(const MisGeometry& geom, double curvature,
                                     const Direction& incident) {
  require(std::isfinite(curvature) && curvature > 0.0,
          "quadratic_template: curvature must be positive");
  QuadraticTemplate t;
  t.curvature = curvature;
  const double d = geom.element_spacing();
  t.dx_max = (geom.shift_rows() - 1) * d;
  t.dy_max = (geom.shift_cols() - 1) * d;
  t.step_x = d;
  t.step_y = d;
  const CVec a_mis = upa_response(geom.rows_ms1(), geom.cols_ms1(), d,
                                  geom.wavelength(), incident);
  t.phase_offset.resize(a_mis.size());
  for (int m = 0; m < a_mis.size(); ++m)
    t.phase_offset[m] = wrap_phase(-std::arg(a_mis[m]));
  return t;
}

PhaseDesign quadratic_phases(const MisGeometry& geom, double curvature,
                             const Direction& incident,
                             std::optional<ReferenceOffset> reference) {
  const QuadraticTemplate t = quadratic_template(geom, curvature, incident);
  const ReferenceOffset ref = reference.value_or(centered_reference(geom));
  const double d = geom.element_spacing();
  const double row_center = 0.5 * (geom.rows_ms1() - 1);
  const double col_center = 0.5 * (geom.cols_ms1() - 1);

  PhaseDesign design;
  design.phi.resize(geom.ms1_size());
  for (int r = 0; r < geom.rows_ms1(); ++r) {
    for (int c = 0; c < geom.cols_ms1(); ++c) {
      const double x = (r - row_center) * d;
      const double y = (c - col_center) * d;
      const int m = r * geom.cols_ms1() + c;
      const double phase =
          -curvature * (x * x + y * y) + t.phase_offset[m];
      design.phi[m] = std::polar(1.0, phase);
    }
  }
  design.theta.resize(geom.ms2_size());
  for (int nr = 0; nr < geom.rows_ms2(); ++nr) {
    for (int nc = 0; nc < geom.cols_ms2(); ++nc) {
      const double x = (nr + ref.row - 1 - row_center) * d;
      const double y = (nc + ref.col - 1 - col_center) * d;
      design.theta[nr * geom.cols_ms2() + nc] =
          std::polar(1.0, curvature * (x * x + y * y));
    }
  }
  return design;
}

Displacement steering_displacement(double curvature, const MisGeometry& geom,
                                   const Direction& target) {
  require(std::isfinite(curvature) && curvature > 0.0,
          "steering_displacement: curvature must be positive");
  const double reach = geom.wavenumber() / (2.0 * curvature);
  const double radial = std::sin(target.elevation);
  return {reach * radial * std::cos(target.azimuth),
          reach * radial * std::sin(target.azimuth)};
}

Direction recover_angles(double curvature, const MisGeometry& geom, double dx,
                         double dy) {
  require(std::isfinite(curvature) && curvature > 0.0,
          "recover_angles: curvature must be positive");
  require(std::isfinite(dx) && std::isfinite(dy),
          "recover_angles: displacements must be finite");
  const double scale = 2.0 * curvature / geom.wavenumber();
  const double radial = scale * std::hypot(dx, dy);
  // Tolerate round-off just past the coverage edge from steering round trips.
  if (radial > 1.0 + 1e-12)
    throw OutOfCoverageError(
        "recover_angles: displacement beyond the reachable set");
  Direction dir;
  dir.azimuth = (dx == 0.0 && dy == 0.0) ? 0.0 : std::atan2(dy, dx);
  dir.elevation = std::asin(std::min(radial, 1.0));
  return dir;
}

double coverage_curvature(const std::vector<Direction>& targets, double dx_max,
                          double dy_max, double omega) {
  require(!targets.empty(), "coverage_curvature: empty target set");
  require(std::isfinite(dx_max) && dx_max > 0.0 && std::isfinite(dy_max) &&
              dy_max > 0.0,
          "coverage_curvature: displacement bounds must be positive");
  require(std::isfinite(omega) && omega > 0.0,
          "coverage_curvature: wavenumber must be positive");
  double max_x = 0.0;
  double max_y = 0.0;
  for (const Direction& dir : targets) {
    const double radial = std::sin(dir.elevation);
    max_x = std::max(max_x, std::abs(radial * std::cos(dir.azimuth)));
    max_y = std::max(max_y, std::abs(radial * std::sin(dir.azimuth)));
  }
  return 0.5 * omega * std::max(max_x / dx_max, max_y / dy_max);
}

double resolution_curvature(const std::vector<Direction>& targets,
                            double step_x, double step_y, double tol_azimuth,
                            double tol_elevation, double omega) {
  require(!targets.empty(), "resolution_curvature: empty target set");
  require(std::isfinite(step_x) && step_x >= 0.0 && std::isfinite(step_y) &&
              step_y >= 0.0 && step_x + step_y > 0.0,
          "resolution_curvature: steps must be non-negative with one positive");
  require(std::isfinite(tol_azimuth) && tol_azimuth > 0.0 &&
              std::isfinite(tol_elevation) && tol_elevation > 0.0,
          "resolution_curvature: tolerances must be positive");
  require(std::isfinite(omega) && omega > 0.0,
          "resolution_curvature: wavenumber must be positive");

  const double den_floor = 1e-12 * std::max(step_x, step_y);
  const double trig_floor = 1e-12;
  double best = std::numeric_limits<double>::infinity();
  for (const Direction& dir : targets) {
    const double sin_el = std::sin(dir.elevation);
    const double cos_el = std::cos(dir.elevation);
    if (std::abs(sin_el) < trig_floor || std::abs(cos_el) < trig_floor)
      continue;  // singular lines carry no usable bound
    const double sin_az = std::sin(dir.azimuth);
    const double cos_az = std::cos(dir.azimuth);
    const double den_az = std::abs(sin_az * step_x - cos_az * step_y);
    const double den_el = std::abs(cos_az * step_x + sin_az * step_y);
    if (den_az > den_floor)
      best = std::min(best, sin_el * tol_azimuth / den_az);
    if (den_el > den_floor)
      best = std::min(best, cos_el * tol_elevation / den_el);
  }
  if (!std::isfinite(best))
    throw NoResolutionBoundError(
        "resolution_curvature: every grid point was singular");
  return 0.5 * omega * best;
}

double choose_curvature(std::optional<double> a_cov,
                        std::optional<double> a_res, const MisGeometry& geom) {
  double chosen = 0.0;
  if (a_cov && a_res) {
    require(std::isfinite(*a_cov) && *a_cov >= 0.0 && std::isfinite(*a_res) &&
                *a_res >= 0.0,
            "choose_curvature: bounds must be non-negative");
    chosen = (*a_cov <= *a_res) ? *a_res : *a_cov;
  } else if (a_res) {
    require(std::isfinite(*a_res) && *a_res >= 0.0,
            "choose_curvature: bounds must be non-negative");
    chosen = *a_res;
  } else if (a_cov) {
    require(std::isfinite(*a_cov) && *a_cov >= 0.0,
            "choose_curvature: bounds must be non-negative");
    chosen = *a_cov;
  } else {
    if (geom.shift_rows() < 2 || geom.shift_cols() < 2)
      throw DegenerateLatticeError(
          "choose_curvature: the default needs at least two offsets per axis");
    chosen = std::numbers::pi /
             (geom.wavelength() * geom.element_spacing()) *
             std::max(1.0 / (geom.shift_rows() - 1),
                      1.0 / (geom.shift_cols() - 1));
  }
  require(chosen > 0.0, "choose_curvature: resolved curvature must be positive");
  return chosen;
}

ClosedFormDesign closed_form_design(const TargetScene& scene,
                                    const MisGeometry& geom,
                                    std::optional<double> curvature) {
  scene.validate();
  if (geom.shift_rows() < 2 || geom.shift_cols() < 2)
    throw DegenerateLatticeError(
        "closed_form_design: steering needs at least two offsets per axis");

  ClosedFormDesign out;
  if (curvature) {
    require(std::isfinite(*curvature) && *curvature > 0.0,
            "closed_form_design: curvature must be positive");
    out.curvature = *curvature;
  } else {
    out.curvature = choose_curvature(std::nullopt, std::nullopt, geom);
  }

  const int count = scene.target_count();
  const double d = geom.element_spacing();
  std::vector<int> q_rows(count);
  std::vector<int> q_cols(count);
  out.displacement.resize(count);
  for (int k = 0; k < count; ++k) {
    out.displacement[k] =
        steering_displacement(out.curvature, geom, scene.targets[k].dir);
    q_rows[k] = quantize_steps(out.displacement[k].dx / d);
    q_cols[k] = quantize_steps(out.displacement[k].dy / d);
  }

  const AxisPlacement rows = place_axis(q_rows, geom.shift_rows());
  const AxisPlacement cols = place_axis(q_cols, geom.shift_cols());
  out.reference = {rows.reference, cols.reference};

  out.offset_rows.resize(count);
  out.offset_cols.resize(count);
  out.clamped.resize(count);
  out.schedule.pattern.resize(count);
  for (int k = 0; k < count; ++k) {
    const int raw_r = rows.reference + q_rows[k];
    const int raw_c = cols.reference + q_cols[k];
    const int u_r = std::clamp(raw_r, 1, geom.shift_rows());
    const int u_c = std::clamp(raw_c, 1, geom.shift_cols());
    out.offset_rows[k] = u_r;
    out.offset_cols[k] = u_c;
    out.clamped[k] = (raw_r != u_r || raw_c != u_c) ? 1 : 0;
    out.schedule.pattern[k] = pattern_index(u_r, u_c, geom);
  }

  out.design =
      quadratic_phases(geom, out.curvature, scene.source, out.reference);
  return out;
}

}  // namespace mis
