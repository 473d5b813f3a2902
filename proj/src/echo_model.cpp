#include "mis/echo_model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mis {

namespace {

constexpr double kDbFloor = -400.0;

void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument(what);
}

void check_design(const PhaseDesign& design, const MisGeometry& geom) {
  require(design.phi.size() == geom.ms1_size(),
          "phase design: phi size does not match MS1");
  require(design.theta.size() == geom.ms2_size(),
          "phase design: theta size does not match MS2");
}

void check_schedule(const Schedule& schedule, const TargetScene& scene,
                    const MisGeometry& geom) {
  require(static_cast<int>(schedule.pattern.size()) == scene.target_count(),
          "schedule: one pattern per target required");
  for (int u : schedule.pattern) {
    require(u >= 1 && u <= geom.pattern_count(),
            "schedule: pattern label out of range");
  }
}

}  // namespace

double TargetScene::noise_floor(int k) const {
  const double l = static_cast<double>(tx_antennas);
  const double s = targets[static_cast<size_t>(k)].sigma;
  return s * s / (tx_power * l * l);
}

void TargetScene::validate() const {
  require(!targets.empty(), "scene: at least one target required");
  require(std::isfinite(tx_power) && tx_power > 0.0,
          "scene: transmit power must be positive");
  require(tx_antennas >= 1, "scene: at least one transmit antenna required");
  require(std::isfinite(source.azimuth) && std::isfinite(source.elevation),
          "scene: source direction must be finite");
  for (const Target& t : targets) {
    require(std::isfinite(t.dir.azimuth) && std::isfinite(t.dir.elevation),
            "scene: target direction must be finite");
    require(t.dir.elevation >= 0.0 && t.dir.elevation <= std::asin(1.0),
            "scene: target elevation must lie in [0, pi/2]");
    require(std::isfinite(t.beta) && t.beta > 0.0,
            "scene: target gain must be positive");
    require(std::isfinite(t.sigma) && t.sigma > 0.0,
            "scene: noise deviation must be positive");
  }
}

double to_db(double x) { return 10.0 * std::log10(x); }

double from_db(double db) { return std::pow(10.0, db / 10.0); }

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double beam_gain(const CVec& v, const CVec& coupling) {
  require(v.size() == coupling.size(), "beam_gain: size mismatch");
  return std::norm(coupling.cwiseProduct(v).sum());
}

double sinr(int k, int u, const PhaseDesign& design, const TargetScene& scene,
            const MisGeometry& geom) {
  scene.validate();
  check_design(design, geom);
  require(k >= 0 && k < scene.target_count(), "sinr: target index out of range");
  require(u >= 1 && u <= geom.pattern_count(),
          "sinr: pattern label out of range");

  const CVec v = effective_v(design.phi, design.theta,
                             overlap_pattern(geom, u));
  double interference = 0.0;
  double signal = 0.0;
  for (int i = 0; i < scene.target_count(); ++i) {
    const Target& t = scene.targets[static_cast<size_t>(i)];
    const CVec c = coupling_vector(geom, scene.source, t.dir);
    const double a = beam_gain(v, c);
    const double echo = t.beta * t.beta * a * a;
    if (i == k) {
      signal = echo;
    } else {
      interference += echo;
    }
  }
  return signal / (interference + scene.noise_floor(k));
}

double min_sinr(const PhaseDesign& design, const Schedule& schedule,
                const TargetScene& scene, const MisGeometry& geom) {
  scene.validate();
  check_design(design, geom);
  check_schedule(schedule, scene, geom);

  const SceneEvaluator eval(scene, geom);
  const RMat table = eval.sinr_table(eval.gain_table(design.phi, design.theta));
  double worst = std::numeric_limits<double>::infinity();
  for (int k = 0; k < scene.target_count(); ++k) {
    worst = std::min(worst, table(k, schedule.pattern[static_cast<size_t>(k)] - 1));
  }
  return worst;
}

Schedule best_schedule(const PhaseDesign& design, const TargetScene& scene,
                       const MisGeometry& geom) {
  scene.validate();
  check_design(design, geom);

  const SceneEvaluator eval(scene, geom);
  const RMat table = eval.sinr_table(eval.gain_table(design.phi, design.theta));
  Schedule schedule;
  schedule.pattern.resize(static_cast<size_t>(scene.target_count()));
  for (int k = 0; k < scene.target_count(); ++k) {
    int best = 1;
    for (int u = 2; u <= geom.pattern_count(); ++u) {
      if (table(k, u - 1) > table(k, best - 1)) best = u;
    }
    schedule.pattern[static_cast<size_t>(k)] = best;
  }
  return schedule;
}

std::vector<BeamMapPoint> beam_map(const PhaseDesign& design, int u,
                                   const TargetScene& scene,
                                   const MisGeometry& geom,
                                   const std::vector<Direction>& grid) {
  scene.validate();
  check_design(design, geom);
  require(u >= 1 && u <= geom.pattern_count(),
          "beam_map: pattern label out of range");
  require(!grid.empty(), "beam_map: empty direction grid");

  const CVec v = effective_v(design.phi, design.theta,
                             overlap_pattern(geom, u));
  std::vector<double> gains;
  gains.reserve(grid.size());
  double peak = 0.0;
  for (const Direction& dir : grid) {
    const CVec c = coupling_vector(geom, scene.source, dir);
    const double a = beam_gain(v, c);
    gains.push_back(a);
    peak = std::max(peak, a);
  }

  std::vector<BeamMapPoint> map;
  map.reserve(grid.size());
  for (size_t i = 0; i < grid.size(); ++i) {
    double db = kDbFloor;
    if (peak > 0.0 && gains[i] > 0.0) {
      db = std::max(kDbFloor, to_db(gains[i] / peak));
    }
    map.push_back({grid[i], db});
  }
  return map;
}

SceneEvaluator::SceneEvaluator(const TargetScene& scene,
                               const MisGeometry& geom)
    : scene_(scene), geom_(geom) {
  scene_.validate();
  patterns_ = all_patterns(geom_);

  const int k_count = scene_.target_count();
  coupling_.resize(k_count, geom_.ms1_size());
  beta_sq_.resize(k_count);
  noise_floor_.resize(k_count);
  for (int k = 0; k < k_count; ++k) {
    const Target& t = scene_.targets[static_cast<size_t>(k)];
    coupling_.row(k) =
        coupling_vector(geom_, scene_.source, t.dir).transpose();
    beta_sq_[k] = t.beta * t.beta;
    noise_floor_[k] = scene_.noise_floor(k);
  }
}

CMat SceneEvaluator::lifted_theta(const CVec& theta) const {
  require(theta.size() == geom_.ms2_size(),
          "lifted_theta: theta size does not match MS2");
  CMat lifted = CMat::Ones(geom_.ms1_size(), geom_.pattern_count());
  for (int u = 0; u < geom_.pattern_count(); ++u) {
    const auto& map = patterns_[static_cast<size_t>(u)].ms1_index;
    for (size_t n = 0; n < map.size(); ++n) {
      lifted(map[n], u) = theta[static_cast<Eigen::Index>(n)];
    }
  }
  return lifted;
}

RMat SceneEvaluator::gain_table(const CVec& phi, const CVec& theta,
                                CMat* inner_products) const {
  require(phi.size() == geom_.ms1_size(),
          "gain_table: phi size does not match MS1");
  // Row k of `projected` is c_k .* phi; one product against the lifted theta
  // columns yields every c_k^T v_u at once.
  const CMat projected =
      coupling_.array().rowwise() * phi.transpose().array();
  const CMat s = projected * lifted_theta(theta);
  if (inner_products != nullptr) *inner_products = s;
  return s.cwiseAbs2();
}

RMat SceneEvaluator::interference_floor(const RMat& gains) const {
  const int k_count = scene_.target_count();
  const int u_count = geom_.pattern_count();
  RMat echo(k_count, u_count);
  for (int k = 0; k < k_count; ++k) {
    for (int u = 0; u < u_count; ++u) {
      echo(k, u) = beta_sq_[k] * gains(k, u) * gains(k, u);
    }
  }
  RMat floor(k_count, u_count);
  const RVec totals = echo.colwise().sum();
  for (int k = 0; k < k_count; ++k) {
    for (int u = 0; u < u_count; ++u) {
      floor(k, u) = totals[u] - echo(k, u) + noise_floor_[k];
    }
  }
  return floor;
}

RMat SceneEvaluator::sinr_table(const RMat& gains) const {
  const RMat floor = interference_floor(gains);
  RMat table(gains.rows(), gains.cols());
  for (Eigen::Index k = 0; k < gains.rows(); ++k) {
    for (Eigen::Index u = 0; u < gains.cols(); ++u) {
      const double echo = beta_sq_[k] * gains(k, u) * gains(k, u);
      table(k, u) = echo / floor(k, u);
    }
  }
  return table;
}

}  // namespace mis
