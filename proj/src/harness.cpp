#include "mis/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace mis {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

constexpr double kRadToDeg = 180.0 / std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "'");
  out << text;
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

/// Wall-clock timings are useful but non-deterministic, so they live in their
/// own sidecar instead of the comparable reports.
void append_timing(const fs::path& dir, const std::string& label,
                   double seconds) {
  std::ofstream out(dir / "timing.log", std::ios::app);
  out << label << " seconds=" << format_double(seconds) << "\n";
}

Json real_array(const RVec& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Json real_part(const CVec& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i].real());
  return arr;
}

Json imag_part(const CVec& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i].imag());
  return arr;
}

RVec schedule_sinr_db(const PhaseDesign& design, const Schedule& schedule,
                      const TargetScene& scene, const MisGeometry& geom) {
  RVec out(scene.target_count());
  for (int k = 0; k < scene.target_count(); ++k)
    out[k] = to_db(sinr(k, schedule.pattern[k], design, scene, geom));
  return out;
}

std::string sinr_csv(const Schedule& schedule, const RVec& sinr_db,
                     const TargetScene& scene) {
  std::string csv = "target,azimuth_deg,elevation_deg,pattern,sinr_db\n";
  for (int k = 0; k < scene.target_count(); ++k) {
    csv += std::to_string(k);
    csv += ',';
    csv += format_double(scene.targets[k].dir.azimuth * kRadToDeg);
    csv += ',';
    csv += format_double(scene.targets[k].dir.elevation * kRadToDeg);
    csv += ',';
    csv += std::to_string(schedule.pattern[k]);
    csv += ',';
    csv += format_double(sinr_db[k]);
    csv += '\n';
  }
  return csv;
}

void put_design(Json& j, const PhaseDesign& design) {
  j["phi_re"] = real_part(design.phi);
  j["phi_im"] = imag_part(design.phi);
  j["theta_re"] = real_part(design.theta);
  j["theta_im"] = imag_part(design.theta);
}

RunResult solve_ralm(const ScenarioConfig& cfg, const TargetScene& scene,
                     const MisGeometry& geom, Json* report) {
  const Clock::time_point t0 = Clock::now();
  const RalmReport rep = ralm_solve(scene, geom, make_solver(cfg));
  RunResult res;
  res.method = RunMethod::kRalm;
  res.design = rep.design;
  res.schedule = rep.schedule;
  res.min_sinr_db = rep.min_sinr_db;
  res.sinr_db = rep.sinr_db;
  res.wall_seconds = seconds_since(t0);
  if (report) {
    Json j;
    j["method"] = "ralm";
    j["config_hash"] = cfg.hash();
    j["seed"] = rep.seed;
    j["eta"] = rep.eta;
    j["min_sinr_db"] = rep.min_sinr_db;
    j["sinr_db"] = real_array(rep.sinr_db);
    j["schedule"] = rep.schedule.pattern;
    j["converged"] = rep.converged;
    j["stalled"] = rep.stalled;
    j["ill_conditioned"] = rep.ill_conditioned;
    j["best_restart"] = rep.best_restart;
    put_design(j, rep.design);
    Json xi = Json::array();
    for (Eigen::Index k = 0; k < rep.xi.rows(); ++k) {
      Json row = Json::array();
      for (Eigen::Index u = 0; u < rep.xi.cols(); ++u)
        row.push_back(rep.xi(k, u));
      xi.push_back(std::move(row));
    }
    j["xi"] = std::move(xi);
    Json trace = Json::array();
    for (const OuterTraceEntry& e : rep.trace) {
      Json t;
      t["outer"] = e.outer;
      t["inner_iterations"] = e.inner_iterations;
      t["aug_lagrangian"] = e.aug_lagrangian;
      t["eta"] = e.eta;
      t["max_violation"] = e.max_violation;
      t["rho"] = e.rho;
      t["rcg_tol"] = e.rcg_tol;
      t["step_distance"] = e.step_distance;
      trace.push_back(std::move(t));
    }
    j["trace"] = std::move(trace);
    *report = std::move(j);
  }
  return res;
}

RunResult solve_closed_form(const ScenarioConfig& cfg, const TargetScene& scene,
                            const MisGeometry& geom, Json* report) {
  const Clock::time_point t0 = Clock::now();
  const ClosedFormDesign out = closed_form_design(scene, geom, cfg.run.curvature);
  RunResult res;
  res.method = RunMethod::kClosedForm;
  res.design = out.design;
  res.schedule = out.schedule;
  res.sinr_db = schedule_sinr_db(out.design, out.schedule, scene, geom);
  res.min_sinr_db = res.sinr_db.minCoeff();
  res.wall_seconds = seconds_since(t0);
  if (report) {
    Json j;
    j["method"] = "closed_form";
    j["config_hash"] = cfg.hash();
    j["seed"] = cfg.run.seed;
    j["curvature"] = out.curvature;
    j["reference_row"] = out.reference.row;
    j["reference_col"] = out.reference.col;
    Json dx = Json::array();
    Json dy = Json::array();
    for (const Displacement& d : out.displacement) {
      dx.push_back(d.dx);
      dy.push_back(d.dy);
    }
    j["displacement_dx"] = std::move(dx);
    j["displacement_dy"] = std::move(dy);
    j["offset_rows"] = out.offset_rows;
    j["offset_cols"] = out.offset_cols;
    Json clamped = Json::array();
    for (std::uint8_t c : out.clamped) clamped.push_back(static_cast<int>(c));
    j["clamped"] = std::move(clamped);
    j["schedule"] = out.schedule.pattern;
    j["min_sinr_db"] = res.min_sinr_db;
    j["sinr_db"] = real_array(res.sinr_db);
    put_design(j, out.design);
    *report = std::move(j);
  }
  return res;
}

std::vector<Direction> beam_grid(const BeamMapConfig& bm) {
  const std::vector<double> az =
      grid_values(bm.azimuth_lo_deg, bm.azimuth_hi_deg, bm.azimuth_points);
  const std::vector<double> el = grid_values(
      bm.elevation_lo_deg, bm.elevation_hi_deg, bm.elevation_points);
  std::vector<Direction> grid;
  grid.reserve(az.size() * el.size());
  for (double a : az)
    for (double e : el)
      grid.push_back({a / kRadToDeg, e / kRadToDeg});
  return grid;
}

CVec vec_from_json(const Json& re, const Json& im, const char* what) {
  if (!re.is_array() || !im.is_array() || re.size() != im.size())
    throw std::runtime_error(std::string("stored design: malformed ") + what);
  CVec v(static_cast<Eigen::Index>(re.size()));
  for (std::size_t i = 0; i < re.size(); ++i)
    v[static_cast<Eigen::Index>(i)] =
        Complex(re[i].get<double>(), im[i].get<double>());
  return v;
}

}  // namespace

std::string format_double(double value) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

StoredDesign load_design(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("missing design file '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw std::runtime_error("cannot parse design file '" + path +
                             "': " + e.what());
  }
  StoredDesign sd;
  sd.design.phi = vec_from_json(j.at("phi_re"), j.at("phi_im"), "phi");
  sd.design.theta = vec_from_json(j.at("theta_re"), j.at("theta_im"), "theta");
  if (!j.contains("schedule") || !j.at("schedule").is_array())
    throw std::runtime_error("stored design: missing schedule");
  sd.schedule.pattern = j.at("schedule").get<std::vector<int>>();
  sd.method = j.value("method", std::string("stored"));
  return sd;
}

RunArtifacts run_scenario(const ScenarioConfig& cfg,
                          const std::string& out_dir) {
  cfg.validate();
  const MisGeometry geom = make_geometry(cfg);
  const TargetScene scene = make_scene(cfg);
  const fs::path dir(out_dir);
  fs::create_directories(dir);

  RunArtifacts art;
  const bool do_ralm = cfg.run.method != RunMethod::kClosedForm;
  const bool do_cf = cfg.run.method != RunMethod::kRalm;

  if (do_ralm) {
    Json report;
    RunResult res = solve_ralm(cfg, scene, geom, &report);
    write_text(dir / "ralm_report.json", report.dump(2) + "\n");
    write_text(dir / "ralm_sinr.csv", sinr_csv(res.schedule, res.sinr_db, scene));
    append_timing(dir, "ralm", res.wall_seconds);
    art.files.push_back((dir / "ralm_report.json").string());
    art.files.push_back((dir / "ralm_sinr.csv").string());
    art.results.push_back(std::move(res));
  }
  if (do_cf) {
    Json report;
    RunResult res = solve_closed_form(cfg, scene, geom, &report);
    write_text(dir / "closed_form_report.json", report.dump(2) + "\n");
    write_text(dir / "closed_form_sinr.csv",
               sinr_csv(res.schedule, res.sinr_db, scene));
    append_timing(dir, "closed_form", res.wall_seconds);
    art.files.push_back((dir / "closed_form_report.json").string());
    art.files.push_back((dir / "closed_form_sinr.csv").string());
    art.results.push_back(std::move(res));
  }
  if (do_ralm && do_cf) {
    Json delta;
    delta["config_hash"] = cfg.hash();
    delta["ralm_min_sinr_db"] = art.results[0].min_sinr_db;
    delta["closed_form_min_sinr_db"] = art.results[1].min_sinr_db;
    delta["delta_db"] = art.results[0].min_sinr_db - art.results[1].min_sinr_db;
    write_text(dir / "delta_summary.json", delta.dump(2) + "\n");
    art.files.push_back((dir / "delta_summary.json").string());
  }
  return art;
}

SweepOutcome run_sweep(const ScenarioConfig& base, int workers,
                       const std::string& out_dir) {
  base.validate();
  if (!base.sweep)
    throw ConfigError("sweep requested but the config has no [sweep] section");
  const SweepSection spec = *base.sweep;
  const std::size_t points = spec.values.size();

  struct PointOutcome {
    std::vector<SweepRow> rows;
    bool ok = false;
    std::string error;
  };
  std::vector<PointOutcome> slots(points);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};

  const bool do_ralm = base.run.method != RunMethod::kClosedForm;
  const bool do_cf = base.run.method != RunMethod::kRalm;

  const auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= points || abort.load(std::memory_order_acquire)) break;
      PointOutcome& slot = slots[i];
      try {
        const ScenarioConfig derived =
            apply_sweep_value(base, spec.variable, spec.values[i]);
        derived.validate();
        const MisGeometry geom = make_geometry(derived);
        const TargetScene scene = make_scene(derived);
        if (do_ralm) {
          const RunResult res = solve_ralm(derived, scene, geom, nullptr);
          slot.rows.push_back({spec.values[i], RunMethod::kRalm,
                               res.min_sinr_db, derived.run.seed});
        }
        if (do_cf) {
          const RunResult res = solve_closed_form(derived, scene, geom, nullptr);
          slot.rows.push_back({spec.values[i], RunMethod::kClosedForm,
                               res.min_sinr_db, derived.run.seed});
        }
        slot.ok = true;
      } catch (const std::exception& e) {
        slot.error = e.what();
        abort.store(true, std::memory_order_release);
      }
    }
  };

  const int thread_count =
      std::max(1, std::min<int>(workers, static_cast<int>(points)));
  if (thread_count == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(thread_count));
    for (int t = 0; t < thread_count; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  SweepOutcome outcome;
  std::vector<double> missing;
  for (std::size_t i = 0; i < points; ++i) {
    if (slots[i].ok) {
      outcome.rows.insert(outcome.rows.end(), slots[i].rows.begin(),
                          slots[i].rows.end());
    } else {
      missing.push_back(spec.values[i]);
      if (outcome.failure.empty() && !slots[i].error.empty())
        outcome.failure = slots[i].error;
    }
  }
  outcome.complete = missing.empty();
  std::stable_sort(outcome.rows.begin(), outcome.rows.end(),
                   [](const SweepRow& a, const SweepRow& b) {
                     return a.value < b.value;
                   });

  const fs::path dir(out_dir);
  fs::create_directories(dir);
  const std::string variable = sweep_variable_name(spec.variable);
  const auto write_method_csv = [&](RunMethod method) {
    std::string csv = "value,min_sinr_db,seed\n";
    for (const SweepRow& row : outcome.rows) {
      if (row.method != method) continue;
      csv += format_double(row.value);
      csv += ',';
      csv += format_double(row.min_sinr_db);
      csv += ',';
      csv += std::to_string(row.seed);
      csv += '\n';
    }
    const fs::path path =
        dir / ("sweep_" + variable + "_" + method_name(method) + ".csv");
    write_text(path, csv);
    outcome.files.push_back(path.string());
  };
  if (do_ralm) write_method_csv(RunMethod::kRalm);
  if (do_cf) write_method_csv(RunMethod::kClosedForm);

  if (!outcome.complete) {
    std::string marker = "partial sweep results\n";
    marker += "variable=" + variable + "\n";
    marker += "first_error=" + outcome.failure + "\n";
    marker += "unfinished_values=";
    for (std::size_t i = 0; i < missing.size(); ++i) {
      if (i) marker += ' ';
      marker += format_double(missing[i]);
    }
    marker += '\n';
    const fs::path path = dir / "sweep_partial.marker";
    write_text(path, marker);
    outcome.files.push_back(path.string());
  }
  return outcome;
}

BeamMapArtifacts run_beam_map(const ScenarioConfig& cfg,
                              const std::string& out_dir) {
  cfg.validate();
  const MisGeometry geom = make_geometry(cfg);
  const TargetScene scene = make_scene(cfg);

  struct Source {
    std::string prefix;
    PhaseDesign design;
    Schedule schedule;
  };
  std::vector<Source> sources;
  if (!cfg.beam_map.design_path.empty()) {
    StoredDesign sd = load_design(cfg.beam_map.design_path);
    if (sd.design.phi.size() != geom.ms1_size() ||
        sd.design.theta.size() != geom.ms2_size())
      throw std::runtime_error(
          "stored design does not match the configured panel sizes");
    if (static_cast<int>(sd.schedule.pattern.size()) != scene.target_count())
      throw std::runtime_error(
          "stored schedule does not match the configured target count");
    sources.push_back({sd.method, std::move(sd.design), std::move(sd.schedule)});
  } else {
    if (cfg.run.method != RunMethod::kClosedForm) {
      const RunResult res = solve_ralm(cfg, scene, geom, nullptr);
      sources.push_back({"ralm", res.design, res.schedule});
    }
    if (cfg.run.method != RunMethod::kRalm) {
      const RunResult res = solve_closed_form(cfg, scene, geom, nullptr);
      sources.push_back({"closed_form", res.design, res.schedule});
    }
  }

  const std::vector<Direction> grid = beam_grid(cfg.beam_map);
  const fs::path dir(out_dir);
  fs::create_directories(dir);

  BeamMapArtifacts art;
  for (const Source& src : sources) {
    const std::set<int> labels(src.schedule.pattern.begin(),
                               src.schedule.pattern.end());
    for (int u : labels) {
      const std::vector<BeamMapPoint> points =
          beam_map(src.design, u, scene, geom, grid);
      std::string csv = "azimuth_deg,elevation_deg,gain_db\n";
      for (const BeamMapPoint& p : points) {
        csv += format_double(p.dir.azimuth * kRadToDeg);
        csv += ',';
        csv += format_double(p.dir.elevation * kRadToDeg);
        csv += ',';
        csv += format_double(p.gain_db);
        csv += '\n';
      }
      const fs::path path =
          dir / (src.prefix + "_beam_u" + std::to_string(u) + ".csv");
      write_text(path, csv);
      art.files.push_back(path.string());
    }
    const RVec sinr_db =
        schedule_sinr_db(src.design, src.schedule, scene, geom);
    const fs::path annot = dir / (src.prefix + "_beam_targets.csv");
    write_text(annot, sinr_csv(src.schedule, sinr_db, scene));
    art.files.push_back(annot.string());
  }
  return art;
}

GradCheckReport run_gradcheck(const ScenarioConfig& cfg,
                              const std::string& out_dir) {
  cfg.validate();
  const MisGeometry geom = make_geometry(cfg);
  const TargetScene scene = make_scene(cfg);
  const RalmProblem problem(scene, geom);
  const int K = problem.target_count();
  const int U = problem.pattern_count();

  std::mt19937_64 rng(cfg.run.seed);
  const auto uniform = [&rng](double lo, double hi) {
    const double x =
        static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1)
    return lo + (hi - lo) * x;
  };

  double max_rel_error = 0.0;
  for (int point = 0; point < cfg.gradcheck.points; ++point) {
    ProductPoint z;
    RVec lambda(K);
    double rho = (point % 2 == 0) ? 1.0 : 2.5;
    // Keep every shifted-penalty branch away from its kink so the difference
    // quotient sees a smooth function.
    for (int attempt = 0; attempt < 64; ++attempt) {
      z.phi = CVec(geom.ms1_size());
      for (Eigen::Index m = 0; m < z.phi.size(); ++m)
        z.phi[m] = std::polar(1.0, uniform(0.0, kTwoPi));
      z.theta = CVec(geom.ms2_size());
      for (Eigen::Index n = 0; n < z.theta.size(); ++n)
        z.theta[n] = std::polar(1.0, uniform(0.0, kTwoPi));
      z.xi.resize(K, U);
      for (int k = 0; k < K; ++k) {
        RVec row(U);
        for (int u = 0; u < U; ++u) row[u] = uniform(0.05, 1.0);
        z.xi.row(k) = (row / row.sum()).transpose();
      }
      const RMat gamma = problem.evaluator().sinr_table(
          problem.evaluator().gain_table(z.phi, z.theta));
      const RVec weighted = (z.xi.array() * gamma.array()).rowwise().sum();
      const double spread =
          std::max(weighted.maxCoeff() - weighted.minCoeff(), 1e-3);
      z.eta = uniform(weighted.minCoeff() - spread, weighted.maxCoeff() + spread);
      for (int k = 0; k < K; ++k) lambda[k] = uniform(0.0, 2.0);
      const RVec q = problem.constraint_values(z);
      bool clear = true;
      for (int k = 0; k < K; ++k)
        if (std::abs(lambda[k] / rho + q[k]) < 1e-3) clear = false;
      if (clear) break;
    }

    const auto value = [&](const ProductPoint& p) {
      return problem.aug_lagrangian(p, lambda, rho);
    };
    const ProductTangent grad = problem.euclid_grad(z, lambda, rho);
    const double h = cfg.gradcheck.step;
    const auto record = [&](double analytic, double numeric) {
      const double rel = std::abs(analytic - numeric) /
                         std::max({1.0, std::abs(analytic), std::abs(numeric)});
      max_rel_error = std::max(max_rel_error, rel);
    };
    {
      ProductPoint zp = z, zm = z;
      zp.eta += h;
      zm.eta -= h;
      record(grad.eta, (value(zp) - value(zm)) / (2.0 * h));
    }
    for (Eigen::Index m = 0; m < z.phi.size(); ++m) {
      ProductPoint zp = z, zm = z;
      zp.phi[m] += h;
      zm.phi[m] -= h;
      record(grad.phi[m].real(), (value(zp) - value(zm)) / (2.0 * h));
      zp = z;
      zm = z;
      zp.phi[m] += Complex(0.0, h);
      zm.phi[m] -= Complex(0.0, h);
      record(grad.phi[m].imag(), (value(zp) - value(zm)) / (2.0 * h));
    }
    for (Eigen::Index n = 0; n < z.theta.size(); ++n) {
      ProductPoint zp = z, zm = z;
      zp.theta[n] += h;
      zm.theta[n] -= h;
      record(grad.theta[n].real(), (value(zp) - value(zm)) / (2.0 * h));
      zp = z;
      zm = z;
      zp.theta[n] += Complex(0.0, h);
      zm.theta[n] -= Complex(0.0, h);
      record(grad.theta[n].imag(), (value(zp) - value(zm)) / (2.0 * h));
    }
    for (int k = 0; k < K; ++k) {
      for (int u = 0; u < U; ++u) {
        ProductPoint zp = z, zm = z;
        zp.xi(k, u) += h;
        zm.xi(k, u) -= h;
        record(grad.xi(k, u), (value(zp) - value(zm)) / (2.0 * h));
      }
    }
  }

  GradCheckReport report;
  report.points = cfg.gradcheck.points;
  report.step = cfg.gradcheck.step;
  report.tolerance = cfg.gradcheck.tolerance;
  report.max_rel_error = max_rel_error;
  report.pass = max_rel_error < cfg.gradcheck.tolerance;

  const fs::path dir(out_dir);
  fs::create_directories(dir);
  Json j;
  j["config_hash"] = cfg.hash();
  j["seed"] = cfg.run.seed;
  j["points"] = report.points;
  j["step"] = report.step;
  j["tolerance"] = report.tolerance;
  j["max_rel_error"] = report.max_rel_error;
  j["pass"] = report.pass;
  write_text(dir / "gradcheck.json", j.dump(2) + "\n");
  return report;
}

OracleReport run_oracle(const ScenarioConfig& cfg, const std::string& out_dir) {
  cfg.validate();
  const MisGeometry geom = make_geometry(cfg);
  const TargetScene scene = make_scene(cfg);
  const int M = geom.ms1_size();
  const int N = geom.ms2_size();
  const int Q = cfg.oracle.levels;
  if (M > 4)
    throw OracleSizeError("oracle enumerates fixed panels up to 4 elements, got " +
                          std::to_string(M));
  if (N != 1)
    throw OracleSizeError("oracle requires a single-element movable panel, got " +
                          std::to_string(N));
  if (Q > 16)
    throw OracleSizeError("oracle enumerates up to 16 phase levels, got " +
                          std::to_string(Q));

  const SceneEvaluator eval(scene, geom);
  std::vector<Complex> roots(static_cast<std::size_t>(Q));
  for (int q = 0; q < Q; ++q)
    roots[static_cast<std::size_t>(q)] = std::polar(1.0, kTwoPi * q / Q);

  // One free digit per fixed-panel element beyond the first (a common phase
  // rotation never changes a gain) plus one digit for the single movable
  // element, which scales only its covered position and therefore matters.
  const int digits = (M - 1) + N;
  std::uint64_t combinations = 1;
  for (int i = 0; i < digits; ++i) combinations *= static_cast<std::uint64_t>(Q);

  CVec phi(M);
  CVec theta(N);
  double best = -1.0;
  std::uint64_t best_combo = 0;
  for (std::uint64_t combo = 0; combo < combinations; ++combo) {
    std::uint64_t rest = combo;
    phi[0] = 1.0;
    for (int m = 1; m < M; ++m) {
      phi[m] = roots[static_cast<std::size_t>(rest % Q)];
      rest /= Q;
    }
    theta[0] = roots[static_cast<std::size_t>(rest % Q)];
    const RMat table = eval.sinr_table(eval.gain_table(phi, theta));
    const double value = table.rowwise().maxCoeff().minCoeff();
    if (value > best) {
      best = value;
      best_combo = combo;
    }
  }

  OracleReport report;
  report.levels = Q;
  report.combinations = combinations;
  {
    std::uint64_t rest = best_combo;
    phi[0] = 1.0;
    for (int m = 1; m < M; ++m) {
      phi[m] = roots[static_cast<std::size_t>(rest % Q)];
      rest /= Q;
    }
    theta[0] = roots[static_cast<std::size_t>(rest % Q)];
  }
  report.oracle_design.phi = phi;
  report.oracle_design.theta = theta;
  report.oracle_schedule = best_schedule(report.oracle_design, scene, geom);
  report.oracle_min_sinr_db = to_db(best);

  const RalmReport ralm = ralm_solve(scene, geom, make_solver(cfg));
  report.ralm_min_sinr_db = ralm.min_sinr_db;
  report.gap_db = report.ralm_min_sinr_db - report.oracle_min_sinr_db;

  const fs::path dir(out_dir);
  fs::create_directories(dir);
  Json j;
  j["config_hash"] = cfg.hash();
  j["seed"] = cfg.run.seed;
  j["levels"] = Q;
  j["combinations"] = combinations;
  j["oracle_min_sinr_db"] = report.oracle_min_sinr_db;
  j["ralm_min_sinr_db"] = report.ralm_min_sinr_db;
  j["gap_db"] = report.gap_db;
  j["oracle_schedule"] = report.oracle_schedule.pattern;
  write_text(dir / "oracle.json", j.dump(2) + "\n");
  return report;
}

}  // namespace mis
