#include "mis/ralm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace mis {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t mix_seed(std::uint64_t seed, int restart) {
  std::uint64_t x =
      seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(restart) + 1);
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

ProductTangent negated(const ProductTangent& t) {
  ProductTangent r;
  r.eta = -t.eta;
  r.phi = -t.phi;
  r.theta = -t.theta;
  r.xi = -t.xi;
  return r;
}

struct BlockInners {
  double eta = 0.0;
  double phi = 0.0;
  double theta = 0.0;
  double xi = 0.0;
};

BlockInners block_inner(const ProductTangent& a, const ProductTangent& b) {
  BlockInners r;
  r.eta = a.eta * b.eta;
  r.phi = a.phi.dot(b.phi).real();
  r.theta = a.theta.dot(b.theta).real();
  r.xi = (a.xi.array() * b.xi.array()).sum();
  return r;
}

double pr_plus(double numerator, double denominator) {
  if (!(denominator > 1e-300)) return 0.0;
  return std::max(0.0, numerator / denominator);
}

}  // namespace

void RalmConfig::validate() const {
  require(std::isfinite(rho0) && rho0 > 0.0, "rho0 must be positive");
  require(std::isfinite(rho_growth) && rho_growth >= 1.0,
          "rho_growth must be at least 1");
  require(violation_ratio > 0.0 && violation_ratio <= 1.0,
          "violation_ratio must lie in (0, 1]");
  require(tol_shrink > 0.0 && tol_shrink <= 1.0,
          "tol_shrink must lie in (0, 1]");
  require(std::isfinite(lambda_min) && lambda_min >= 0.0,
          "lambda_min must be non-negative");
  require(std::isfinite(lambda_max) && lambda_max >= lambda_min,
          "lambda_max must be at least lambda_min");
  require(std::isfinite(tol_min) && tol_min > 0.0, "tol_min must be positive");
  require(std::isfinite(rcg_tol0) && rcg_tol0 >= tol_min,
          "rcg_tol0 must be at least tol_min");
  require(std::isfinite(step_min) && step_min > 0.0,
          "step_min must be positive");
  require(armijo_c1 > 0.0 && armijo_c1 < 1.0, "armijo_c1 must lie in (0, 1)");
  require(backtrack > 0.0 && backtrack < 1.0, "backtrack must lie in (0, 1)");
  require(max_linesearch >= 1, "max_linesearch must be at least 1");
  require(max_inner >= 1, "max_inner must be at least 1");
  require(max_outer >= 1, "max_outer must be at least 1");
  require(restarts >= 1, "restarts must be at least 1");
}

RalmProblem::RalmProblem(const TargetScene& scene, const MisGeometry& geom)
    : eval_(scene, geom) {}

void RalmProblem::check_point(const ProductPoint& z) const {
  require(std::isfinite(z.eta), "eta must be finite");
  require(z.phi.size() == eval_.geometry().ms1_size(),
          "phi size must match the fixed panel");
  require(z.theta.size() == eval_.geometry().ms2_size(),
          "theta size must match the movable panel");
  require(z.xi.rows() == target_count() && z.xi.cols() == pattern_count(),
          "xi must be targets x patterns");
}

RVec RalmProblem::constraint_values(const ProductPoint& z) const {
  check_point(z);
  const RMat gamma = eval_.sinr_table(eval_.gain_table(z.phi, z.theta));
  const RVec weighted = (z.xi.array() * gamma.array()).rowwise().sum();
  return RVec::Constant(target_count(), z.eta) - weighted;
}

double RalmProblem::aug_lagrangian(const ProductPoint& z, const RVec& lambda,
                                   double rho) const {
  require(lambda.size() == target_count(),
          "lambda must hold one multiplier per target");
  require(std::isfinite(rho) && rho > 0.0, "rho must be positive");
  const RVec q = constraint_values(z);
  double penalty = 0.0;
  for (int k = 0; k < q.size(); ++k) {
    const double shifted = lambda[k] / rho + q[k];
    if (shifted > 0.0) penalty += shifted * shifted;
  }
  return -z.eta + 0.5 * rho * penalty;
}

ProductTangent RalmProblem::euclid_grad(const ProductPoint& z,
                                        const RVec& lambda, double rho) const {
  require(lambda.size() == target_count(),
          "lambda must hold one multiplier per target");
  require(std::isfinite(rho) && rho > 0.0, "rho must be positive");
  check_point(z);
  const int K = target_count();
  const int U = pattern_count();
  const int N = eval_.geometry().ms2_size();
  const RVec& beta_sq = eval_.beta_sq();

  CMat s;
  const RMat a = eval_.gain_table(z.phi, z.theta, &s);
  const RMat b = eval_.interference_floor(a);
  const RMat gamma =
      ((a.array().square().colwise() * beta_sq.array()) / b.array()).matrix();
  const RVec weighted = (z.xi.array() * gamma.array()).rowwise().sum();

  RVec chi = RVec::Zero(K);
  for (int k = 0; k < K; ++k) {
    const double q_k = z.eta - weighted[k];
    if (lambda[k] / rho + q_k > 0.0) chi[k] = lambda[k] + rho * q_k;
  }

  ProductTangent g;
  g.eta = -1.0 + chi.sum();
  g.xi = (-(gamma.array().colwise() * chi.array())).matrix();

  // Gain-level chain weights. E holds each active constraint's own echo term,
  // T its column sums, and D the net sensitivity of the penalty to a[i][u]:
  // the direct echo benefit of target i minus the interference it inflicts on
  // every other active constraint sharing pattern u.
  const RMat e_own =
      ((z.xi.array() * gamma.array() / b.array()).colwise() * chi.array())
          .matrix();
  const RVec t_col = e_own.colwise().sum();
  const RMat d_net =
      (2.0 * (a.array().colwise() * beta_sq.array()) *
       (((z.xi.array() / b.array()).colwise() * chi.array()) -
        ((-e_own).array().rowwise() + t_col.transpose().array())))
          .matrix();

  const CMat y = s.cwiseProduct((2.0 * d_net).cast<Complex>());
  const CMat grad_gain = eval_.coupling().adjoint() * y;  // M x U
  const CMat lift = eval_.lifted_theta(z.theta);

  g.phi = -(lift.conjugate().cwiseProduct(grad_gain)).rowwise().sum();
  g.theta = CVec::Zero(N);
  const auto& patterns = eval_.patterns();
  for (int u = 0; u < U; ++u) {
    const auto& map = patterns[u].ms1_index;
    for (int n = 0; n < N; ++n) {
      const int m = map[n];
      g.theta[n] -= std::conj(z.phi[m]) * grad_gain(m, u);
    }
  }
  return g;
}

ProductPoint RalmProblem::initial_point(std::mt19937_64& rng) const {
  const int M = eval_.geometry().ms1_size();
  const int N = eval_.geometry().ms2_size();
  const int K = target_count();
  const int U = pattern_count();
  ProductPoint z;
  z.phi.resize(M);
  for (int m = 0; m < M; ++m) z.phi[m] = std::polar(1.0, kTwoPi * uniform01(rng));
  z.theta.resize(N);
  for (int n = 0; n < N; ++n)
    z.theta[n] = std::polar(1.0, kTwoPi * uniform01(rng));
  z.xi = RMat::Constant(K, U, 1.0 / static_cast<double>(U));
  const RMat gamma = eval_.sinr_table(eval_.gain_table(z.phi, z.theta));
  z.eta = gamma.rowwise().maxCoeff().minCoeff();
  return z;
}

RcgResult rcg_solve(const RalmProblem& problem, const ProductPoint& z0,
                    const RVec& lambda, double rho, double tol,
                    const RalmConfig& cfg) {
  cfg.validate();
  require(std::isfinite(tol) && tol > 0.0, "tol must be positive");

  RcgResult res;
  ProductPoint z = z0;
  double value = problem.aug_lagrangian(z, lambda, rho);
  ProductTangent g = project_tangent(z, problem.euclid_grad(z, lambda, rho));
  double gnorm = tangent_norm(g);
  ProductTangent d = negated(g);
  res.objective_trace.push_back(value);

  double alpha_prev = 0.0;
  bool have_alpha = false;

  // Backtracking Armijo search along `dir`; returns false when no step of the
  // budgeted lengths achieves sufficient decrease (degenerate retractions are
  // treated as rejected steps).
  const auto search = [&](const ProductTangent& dir, double slope,
                          double alpha0, ProductPoint& z_next, double& v_next,
                          double& alpha_used) -> bool {
    double alpha = alpha0;
    for (int t = 0; t < cfg.max_linesearch; ++t) {
      bool rejected = false;
      ProductPoint cand;
      try {
        cand = retract(z, dir, alpha);
      } catch (const DegenerateStepError&) {
        rejected = true;
      }
      if (!rejected) {
        const double v = problem.aug_lagrangian(cand, lambda, rho);
        if (std::isfinite(v) && v <= value + cfg.armijo_c1 * alpha * slope) {
          z_next = std::move(cand);
          v_next = v;
          alpha_used = alpha;
          return true;
        }
      }
      alpha *= cfg.backtrack;
    }
    return false;
  };

  int it = 0;
  while (it < cfg.max_inner) {
    if (gnorm <= tol) {
      res.reached_tolerance = true;
      break;
    }
    double slope = inner(g, d);
    bool is_steepest = false;
    if (!(slope < 0.0)) {
      d = negated(g);
      slope = -gnorm * gnorm;
      is_steepest = true;
    }
    const double dnorm = tangent_norm(d);
    double alpha0 = have_alpha ? std::min(alpha_prev / cfg.backtrack, 1e8)
                               : 1.0 / std::max(1.0, dnorm);

    ProductPoint z_next;
    double v_next = 0.0;
    double alpha_used = 0.0;
    bool ok = search(d, slope, alpha0, z_next, v_next, alpha_used);
    if (!ok && !is_steepest) {
      d = negated(g);
      slope = -gnorm * gnorm;
      is_steepest = true;
      alpha0 = 1.0 / std::max(1.0, gnorm);
      ok = search(d, slope, alpha0, z_next, v_next, alpha_used);
    }
    if (!ok) {
      res.stalled = true;
      break;
    }

    ProductTangent g_new =
        project_tangent(z_next, problem.euclid_grad(z_next, lambda, rho));
    const ProductTangent td = transport(z_next, d);

    ProductTangent diff;
    diff.eta = g_new.eta - g.eta;
    diff.phi = g_new.phi - g.phi;
    diff.theta = g_new.theta - g.theta;
    diff.xi = g_new.xi - g.xi;
    const BlockInners num = block_inner(g_new, diff);
    const BlockInners den = block_inner(g, g);

    ProductTangent d_new = negated(g_new);
    d_new.eta += pr_plus(num.eta, den.eta) * td.eta;
    d_new.phi += pr_plus(num.phi, den.phi) * td.phi;
    d_new.theta += pr_plus(num.theta, den.theta) * td.theta;
    d_new.xi += pr_plus(num.xi, den.xi) * td.xi;

    z = std::move(z_next);
    value = v_next;
    g = std::move(g_new);
    d = std::move(d_new);
    gnorm = tangent_norm(g);
    alpha_prev = alpha_used;
    have_alpha = true;
    res.objective_trace.push_back(value);
    ++it;
  }

  res.z = std::move(z);
  res.iterations = it;
  return res;
}

void multiplier_update(RalmState& state, const RVec& q, const RalmConfig& cfg) {
  require(state.lambda.size() == q.size(),
          "state multipliers must match the constraint count");
  require(std::isfinite(state.rho) && state.rho > 0.0, "rho must be positive");
  const int K = static_cast<int>(q.size());
  RVec iota(K);
  for (int k = 0; k < K; ++k)
    iota[k] = std::max(q[k], -state.lambda[k] / state.rho);
  for (int k = 0; k < K; ++k)
    state.lambda[k] = std::clamp(state.lambda[k] + state.rho * q[k],
                                 cfg.lambda_min, cfg.lambda_max);
  state.violation = std::move(iota);
}

void multiplier_update(RalmState& state, const ProductPoint& z_new,
                       const RalmProblem& problem, const RalmConfig& cfg) {
  multiplier_update(state, problem.constraint_values(z_new), cfg);
}

double penalty_update(double rho, const RVec& violation_new,
                      const RVec& violation_old, int outer_index,
                      const RalmConfig& cfg) {
  require(std::isfinite(rho) && rho > 0.0, "rho must be positive");
  if (outer_index == 0) return rho;
  require(violation_new.size() > 0 &&
              violation_new.size() == violation_old.size(),
          "violation vectors must be non-empty and equally sized");
  if (violation_new.maxCoeff() <=
      cfg.violation_ratio * violation_old.maxCoeff())
    return rho;
  return rho * cfg.rho_growth;
}

Schedule round_schedule(const ProductPoint& z, const RalmProblem& problem) {
  const SceneEvaluator& eval = problem.evaluator();
  const RMat gamma = eval.sinr_table(eval.gain_table(z.phi, z.theta));
  Schedule sched;
  sched.pattern.resize(gamma.rows());
  for (int k = 0; k < gamma.rows(); ++k) {
    int best = 0;
    for (int u = 1; u < gamma.cols(); ++u)
      if (gamma(k, u) > gamma(k, best)) best = u;
    sched.pattern[k] = best + 1;
  }
  return sched;
}

RalmReport ralm_solve(const TargetScene& scene, const MisGeometry& geom,
                      const RalmConfig& cfg) {
  cfg.validate();
  scene.validate();
  const auto t0 = std::chrono::steady_clock::now();

  RalmProblem problem(scene, geom);
  const SceneEvaluator& eval = problem.evaluator();
  const int K = problem.target_count();

  // Near-collinear couplings make the targets' echoes inseparable; flag the
  // run so downstream consumers can distrust the schedule.
  bool ill = false;
  const CMat& coupling = eval.coupling();
  const double gain_cap = static_cast<double>(geom.ms1_size());
  for (int i = 0; i < K && !ill; ++i) {
    for (int j = i + 1; j < K; ++j) {
      const Complex ip =
          coupling.row(i).conjugate().cwiseProduct(coupling.row(j)).sum();
      if (std::abs(ip) >= gain_cap * (1.0 - 1e-9)) {
        ill = true;
        break;
      }
    }
  }

  RalmReport best;
  bool have_best = false;
  double best_value = -std::numeric_limits<double>::infinity();

  for (int r = 0; r < cfg.restarts; ++r) {
    std::mt19937_64 rng(mix_seed(cfg.seed, r));
    RalmState state;
    state.z = problem.initial_point(rng);
    state.lambda = RVec::Constant(K, std::clamp(0.0, cfg.lambda_min,
                                                cfg.lambda_max));
    state.rho = cfg.rho0;
    state.rcg_tol = cfg.rcg_tol0;

    std::vector<OuterTraceEntry> trace;
    bool converged = false;
    bool stalled = false;
    for (int l = 0; l < cfg.max_outer; ++l) {
      const double rho_used = state.rho;
      const double tol_used = state.rcg_tol;
      const RcgResult inner_res =
          rcg_solve(problem, state.z, state.lambda, rho_used, tol_used, cfg);
      stalled = inner_res.stalled;
      const double dist = point_distance(state.z, inner_res.z);
      const RVec q = problem.constraint_values(inner_res.z);
      const RVec violation_old = state.violation;
      multiplier_update(state, q, cfg);
      state.rho =
          penalty_update(state.rho, state.violation, violation_old, l, cfg);
      state.rcg_tol = std::max(cfg.tol_min, cfg.tol_shrink * state.rcg_tol);
      state.z = inner_res.z;
      state.outer = l + 1;

      OuterTraceEntry entry;
      entry.outer = l + 1;
      entry.inner_iterations = inner_res.iterations;
      entry.aug_lagrangian = inner_res.objective_trace.back();
      entry.eta = state.z.eta;
      entry.max_violation = K > 0 ? std::max(0.0, q.maxCoeff()) : 0.0;
      entry.rho = rho_used;
      entry.rcg_tol = tol_used;
      entry.step_distance = dist;
      trace.push_back(entry);

      if (dist < cfg.step_min && tol_used <= cfg.tol_min) {
        converged = true;
        break;
      }
    }

    const Schedule sched = round_schedule(state.z, problem);
    const RMat gamma =
        eval.sinr_table(eval.gain_table(state.z.phi, state.z.theta));
    double value = std::numeric_limits<double>::infinity();
    for (int k = 0; k < K; ++k)
      value = std::min(value, gamma(k, sched.pattern[k] - 1));

    if (!have_best || value > best_value) {
      have_best = true;
      best_value = value;
      best.design = PhaseDesign{state.z.phi, state.z.theta};
      best.schedule = sched;
      best.eta = state.z.eta;
      best.min_sinr_db = to_db(value);
      best.sinr_db.resize(K);
      for (int k = 0; k < K; ++k)
        best.sinr_db[k] = to_db(gamma(k, sched.pattern[k] - 1));
      best.xi = state.z.xi;
      best.trace = trace;
      best.converged = converged;
      best.stalled = stalled;
      best.best_restart = r;
    }
  }

  best.ill_conditioned = ill;
  best.seed = cfg.seed;
  best.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return best;
}

}  // namespace mis
