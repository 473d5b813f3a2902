#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "mis/config.hpp"
#include "mis/harness.hpp"

namespace {

void print_files(const std::vector<std::string>& files) {
  for (const std::string& f : files) std::cout << "wrote " << f << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-layer movable-surface sensing simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string method;
  std::uint64_t seed = 0;
  int workers = 1;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "scenario config file")
        ->required();
    sub->add_option("--out", out_dir, "output directory (overrides run.out_dir)");
    sub->add_option("--seed", seed, "seed override");
    sub->add_option("--method", method, "ralm, closed-form, or both");
  };

  CLI::App* cmd_run = app.add_subcommand("run", "solve one scenario");
  add_common(cmd_run);
  CLI::App* cmd_sweep =
      app.add_subcommand("sweep", "run the configured parameter sweep");
  add_common(cmd_sweep);
  cmd_sweep->add_option("--workers", workers, "concurrent sweep points")
      ->check(CLI::PositiveNumber);
  CLI::App* cmd_beam =
      app.add_subcommand("beam-map", "export per-pattern gain maps");
  add_common(cmd_beam);
  CLI::App* cmd_grad =
      app.add_subcommand("gradcheck", "finite-difference gradient audit");
  add_common(cmd_grad);
  CLI::App* cmd_oracle =
      app.add_subcommand("oracle", "exhaustive quantized-phase baseline");
  add_common(cmd_oracle);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  CLI::App* active = app.get_subcommands().front();
  try {
    mis::ScenarioConfig cfg = mis::load_config(config_path);
    if (active->count("--seed")) cfg.run.seed = seed;
    cfg.solver.seed = cfg.run.seed;
    if (active->count("--method")) cfg.run.method = mis::parse_method(method);
    const std::string out =
        active->count("--out") ? out_dir : cfg.run.out_dir;

    if (active == cmd_run) {
      const mis::RunArtifacts art = mis::run_scenario(cfg, out);
      for (const mis::RunResult& res : art.results)
        std::cout << mis::method_name(res.method)
                  << " min_sinr_db=" << mis::format_double(res.min_sinr_db)
                  << "\n";
      print_files(art.files);
    } else if (active == cmd_sweep) {
      const mis::SweepOutcome outcome = mis::run_sweep(cfg, workers, out);
      std::cout << "sweep rows=" << outcome.rows.size() << "\n";
      print_files(outcome.files);
      if (!outcome.complete) {
        std::cerr << "sweep incomplete: " << outcome.failure << "\n";
        return 3;
      }
    } else if (active == cmd_beam) {
      const mis::BeamMapArtifacts art = mis::run_beam_map(cfg, out);
      print_files(art.files);
    } else if (active == cmd_grad) {
      const mis::GradCheckReport report = mis::run_gradcheck(cfg, out);
      std::cout << "gradcheck max_rel_error="
                << mis::format_double(report.max_rel_error) << " tolerance="
                << mis::format_double(report.tolerance)
                << (report.pass ? " PASS" : " FAIL") << "\n";
      if (!report.pass) return 3;
    } else if (active == cmd_oracle) {
      const mis::OracleReport report = mis::run_oracle(cfg, out);
      std::cout << "oracle_min_sinr_db="
                << mis::format_double(report.oracle_min_sinr_db)
                << " ralm_min_sinr_db="
                << mis::format_double(report.ralm_min_sinr_db)
                << " gap_db=" << mis::format_double(report.gap_db) << "\n";
    }
    return 0;
  } catch (const mis::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const mis::OracleSizeError& e) {
    std::cerr << "oracle refusal: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
