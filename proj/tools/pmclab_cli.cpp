#include "pmclab/config.hpp"
#include "pmclab/experiments.hpp"
#include "pmclab/star_region.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

namespace {

std::string default_out_dir(const pmclab::ExperimentConfig& cfg,
                            const std::string& cli_out) {
  if (!cli_out.empty()) return cli_out;
  if (cfg.has("out_dir")) return cfg.get_string("out_dir");
  if (const char* env = std::getenv("PMCLAB_OUT_DIR")) return env;
  return "out";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pmclab: prescribed-mean-curvature min-max laboratory"};
  app.require_subcommand(1);

  std::string config_path, out_dir, seed_override, jobs_override;

  CLI::App* run = app.add_subcommand("run", "execute an experiment config");
  run->add_option("config", config_path, "path to the config file")->required();
  run->add_option("--out-dir", out_dir, "output directory override");
  run->add_option("--seed", seed_override, "seed override");
  run->add_option("--jobs", jobs_override, "worker count override");

  CLI::App* validate =
      app.add_subcommand("validate", "schema/range check, no computation");
  validate->add_option("config", config_path, "path to the config file")
      ->required();

  CLI11_PARSE(app, argc, argv);

  if (validate->parsed()) {
    const auto problems = pmclab::ExperimentConfig::validate_file(config_path);
    if (problems.empty()) {
      std::cout << "ok\n";
      return 0;
    }
    for (const auto& p : problems) std::cout << p << "\n";
    return 2;
  }

  try {
    pmclab::ExperimentConfig cfg =
        pmclab::ExperimentConfig::parse_file(config_path);
    if (!seed_override.empty()) cfg.override_value("seed", seed_override);
    if (!jobs_override.empty()) cfg.override_value("jobs", jobs_override);
    const std::string out = default_out_dir(cfg, out_dir);

    pmclab::RunManifest manifest = pmclab::run_experiment(cfg, out);
    int failures = 0;
    for (const auto& a : manifest.assertions) {
      std::cout << (a.pass ? "[PASS] " : "[FAIL] ") << a.name;
      if (!a.detail.empty()) std::cout << " (" << a.detail << ")";
      std::cout << "\n";
      if (!a.pass) ++failures;
    }
    std::cout << manifest.experiment << ": " << manifest.files.size()
              << " files in " << out << ", " << manifest.wall_seconds << " s\n";
    return failures == 0 ? 0 : 1;
  } catch (const pmclab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const pmclab::Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
