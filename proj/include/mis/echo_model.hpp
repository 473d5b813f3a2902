#pragma once

#include <vector>

#include "mis/geometry.hpp"

namespace mis {

/// One scatterer to sense: direction, two-hop amplitude gain beta (absorbs both
/// path losses and the radar cross section), and receiver noise deviation.
struct Target {
  Direction dir;
  double beta = 1.0;
  double sigma = 1.0;
};

/// A sensing scene: the scatterers, the direction the illuminating source is
/// seen from, the transmit power (watts) and the number of transmit antennas.
struct TargetScene {
  std::vector<Target> targets;
  Direction source;       // direction of the illuminator / receiver
  double tx_power = 1.0;  // watts
  int tx_antennas = 1;

  int target_count() const { return static_cast<int>(targets.size()); }

  /// Effective noise floor of target k after transmit gain: sigma_k^2 / (P*L^2).
  double noise_floor(int k) const;

  void validate() const;
};

/// Per-element phase coefficients of the two panels (unit modulus).
struct PhaseDesign {
  CVec phi;    // MS1, size M
  CVec theta;  // MS2, size N
};

/// Pattern assignment: for each target, the pattern label (1..U) used while
/// sensing it.
struct Schedule {
  std::vector<int> pattern;
};

double to_db(double x);
double from_db(double db);
double dbm_to_watts(double dbm);

/// Two-hop beam gain |c^T v|^2 of an effective phase vector v against a
/// coupling vector c. Never materializes the rank-1 coupling matrix. The value
/// lies in [0, M^2].
double beam_gain(const CVec& v, const CVec& coupling);

/// Echo SINR of target k (zero-based) under pattern u (one-based): the k-th
/// two-hop echo power over the other targets' echoes plus the effective noise
/// floor. Both hops pass through the surface, so gains enter squared.
double sinr(int k, int u, const PhaseDesign& design, const TargetScene& scene,
            const MisGeometry& geom);

/// Worst scheduled SINR: min over k of sinr(k, schedule.pattern[k]).
double min_sinr(const PhaseDesign& design, const Schedule& schedule,
                const TargetScene& scene, const MisGeometry& geom);

/// For each target pick the pattern with the largest SINR (smallest label on
/// ties).
Schedule best_schedule(const PhaseDesign& design, const TargetScene& scene,
                       const MisGeometry& geom);

struct BeamMapPoint {
  Direction dir;
  double gain_db = 0.0;  // normalized to the grid maximum
};

/// Relative two-hop gain map of one pattern over a direction grid, normalized
/// so the strongest grid point is 0 dB. Zero-gain points are floored at
/// -400 dB to keep file output finite.
std::vector<BeamMapPoint> beam_map(const PhaseDesign& design, int u,
                                   const TargetScene& scene,
                                   const MisGeometry& geom,
                                   const std::vector<Direction>& grid);

/// Precomputes couplings and placements for a scene so that per-design gain
/// and SINR tables come down to one small complex matrix product. This is the
/// hot path of the optimizer.
class SceneEvaluator {
 public:
  SceneEvaluator(const TargetScene& scene, const MisGeometry& geom);

  const MisGeometry& geometry() const { return geom_; }
  const TargetScene& scene() const { return scene_; }
  const std::vector<OverlapPattern>& patterns() const { return patterns_; }

  /// K x M matrix whose k-th row is the coupling vector of target k.
  const CMat& coupling() const { return coupling_; }
  const RVec& beta_sq() const { return beta_sq_; }
  const RVec& noise_floor() const { return noise_floor_; }

  /// M x U matrix whose u-th column is theta lifted onto the MS1 grid.
  CMat lifted_theta(const CVec& theta) const;

  /// Beam gains a[k][u] for every target/pattern combination. If
  /// `inner_products` is given it receives the complex projections
  /// s[k][u] = c_k^T v_u (needed for gradients).
  RMat gain_table(const CVec& phi, const CVec& theta,
                  CMat* inner_products = nullptr) const;

  /// Interference-plus-noise floor b[k][u] from a gain table.
  RMat interference_floor(const RMat& gains) const;

  /// Per-target, per-pattern SINR table from a gain table.
  RMat sinr_table(const RMat& gains) const;

 private:
  TargetScene scene_;
  MisGeometry geom_;
  std::vector<OverlapPattern> patterns_;
  CMat coupling_;
  RVec beta_sq_;
  RVec noise_floor_;
};

}  // namespace mis
