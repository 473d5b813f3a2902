#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "mis/echo_model.hpp"
#include "mis/manifolds.hpp"

namespace mis {

/// Tuning of the augmented Lagrangian solver and its inner conjugate-gradient
/// loop. The defaults are safeguarded textbook choices; every field can be
/// overridden from a scenario file.
struct RalmConfig {
  double rho0 = 1.0;             // initial penalty coefficient
  double rho_growth = 2.0;       // penalty multiplier when violations stagnate
  double violation_ratio = 0.8;  // required per-round violation shrink factor
  double tol_shrink = 0.9;       // inner tolerance decay per outer round
  double lambda_min = 0.0;       // multiplier clip range
  double lambda_max = 100.0;
  double rcg_tol0 = 1e-2;        // initial inner gradient-norm tolerance
  double tol_min = 1e-6;         // final inner gradient-norm tolerance
  double step_min = 1e-6;        // outer stop: iterate distance threshold
  double armijo_c1 = 1e-4;       // sufficient-decrease constant
  double backtrack = 0.5;        // line-search shrink factor
  int max_linesearch = 30;
  int max_inner = 500;
  int max_outer = 50;
  int restarts = 5;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Mutable outer-loop state: current iterate, multipliers, penalty, the last
/// violation measure and the inner tolerance.
struct RalmState {
  ProductPoint z;
  RVec lambda;
  double rho = 1.0;
  RVec violation;  // iota from the latest multiplier update
  double rcg_tol = 1e-2;
  int outer = 0;
};

struct OuterTraceEntry {
  int outer = 0;
  int inner_iterations = 0;
  double aug_lagrangian = 0.0;
  double eta = 0.0;
  double max_violation = 0.0;  // max_k max(q_k, 0)
  double rho = 0.0;
  double rcg_tol = 0.0;
  double step_distance = 0.0;
};

struct RalmReport {
  PhaseDesign design;
  Schedule schedule;
  double eta = 0.0;         // converged worst-SINR proxy (linear)
  double min_sinr_db = 0.0;
  RVec sinr_db;             // per target at the rounded schedule
  RMat xi;                  // relaxed scheduling weights (diagnostic)
  std::vector<OuterTraceEntry> trace;  // best restart only
  bool converged = false;
  bool stalled = false;
  bool ill_conditioned = false;
  int best_restart = 0;
  std::uint64_t seed = 0;
  double wall_seconds = 0.0;  // informational; excluded from serialization
};

/// Scene-bound evaluation of the augmented Lagrangian: constraint slacks,
/// objective value and ambient gradients, plus a deterministic initial point.
class RalmProblem {
 public:
  RalmProblem(const TargetScene& scene, const MisGeometry& geom);

  const SceneEvaluator& evaluator() const { return eval_; }
  int target_count() const { return eval_.scene().target_count(); }
  int pattern_count() const { return eval_.geometry().pattern_count(); }

  /// Constraint slack per target: q_k = eta - sum_u xi[k][u] * sinr[k][u].
  /// Feasible points have q_k <= 0.
  RVec constraint_values(const ProductPoint& z) const;

  /// L_rho(z; lambda) = -eta + (rho/2) * sum_k max(0, lambda_k/rho + q_k)^2.
  double aug_lagrangian(const ProductPoint& z, const RVec& lambda,
                        double rho) const;

  /// Ambient (unconstrained) gradient of the augmented Lagrangian. Constraints
  /// on the inactive branch (lambda_k/rho + q_k <= 0) contribute nothing; with
  /// every constraint inactive this is (-1, 0, 0, 0).
  ProductTangent euclid_grad(const ProductPoint& z, const RVec& lambda,
                             double rho) const;

  /// Random phases, uniform scheduling weights, and eta at the best achievable
  /// worst-case SINR of the initial phases. Draws phi then theta from `rng`.
  ProductPoint initial_point(std::mt19937_64& rng) const;

 private:
  SceneEvaluator eval_;
  void check_point(const ProductPoint& z) const;
};

struct RcgResult {
  ProductPoint z;
  int iterations = 0;
  bool reached_tolerance = false;
  bool stalled = false;
  /// Objective value at the start plus after every accepted step
  /// (non-increasing by construction).
  std::vector<double> objective_trace;
};

/// Minimize the augmented Lagrangian over the product manifold by Riemannian
/// conjugate gradients: per-block Polak-Ribiere(+) directions with transport,
/// Armijo backtracking, and a steepest-descent fallback when a conjugate step
/// fails to make progress.
RcgResult rcg_solve(const RalmProblem& problem, const ProductPoint& z0,
                    const RVec& lambda, double rho, double tol,
                    const RalmConfig& cfg);

/// Dual update at the new iterate: records the violation measure
/// iota_k = max(q_k, -lambda_k/rho) with the *old* multipliers, then clips
/// lambda_k + rho*q_k into [lambda_min, lambda_max].
void multiplier_update(RalmState& state, const RVec& q, const RalmConfig& cfg);
void multiplier_update(RalmState& state, const ProductPoint& z_new,
                       const RalmProblem& problem, const RalmConfig& cfg);

/// Keep rho on the first round or when the violation measure shrank by at
/// least violation_ratio; otherwise grow it by rho_growth.
double penalty_update(double rho, const RVec& violation_new,
                      const RVec& violation_old, int outer_index,
                      const RalmConfig& cfg);

/// Final rounding of the relaxed weights: each target takes its per-row
/// best-SINR pattern (smallest label on ties). The relaxed xi is only
/// reported, never used for the returned schedule.
Schedule round_schedule(const ProductPoint& z, const RalmProblem& problem);

/// Full solver: multi-start RALM, keeping the restart with the best rounded
/// worst-case SINR. Deterministic for a fixed (scene, geometry, config).
RalmReport ralm_solve(const TargetScene& scene, const MisGeometry& geom,
                      const RalmConfig& cfg);

}  // namespace mis
