#include "pmclab/config.hpp"
#include "pmclab/experiments.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace pmclab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("pmclab_test_" + tag);
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("config validation") {
  // Empty text: every required key reported missing.
  auto problems = ExperimentConfig::validate_text("");
  REQUIRE(problems.size() == 2);
  CHECK(problems[0].find("experiment") != std::string::npos);
  CHECK(problems[1].find("seed") != std::string::npos);

  // A valid config validates clean.
  CHECK(ExperimentConfig::validate_text(
            "experiment = width-sweep\nseed = 7\n# comment\njobs = 2\n")
            .empty());

  // Range violation: a path needs at least 2 nodes.
  problems = ExperimentConfig::validate_text(
      "experiment = pmc-solve\nseed = 1\npath.nodes = 1\n");
  REQUIRE(problems.size() == 1);
  CHECK(problems[0].find("path.nodes") != std::string::npos);

  // Unknown keys are rejected by name.
  problems = ExperimentConfig::validate_text(
      "experiment = pmc-solve\nseed = 1\nturbo = yes\n");
  REQUIRE(problems.size() == 1);
  CHECK(problems[0].find("turbo") != std::string::npos);
  CHECK(problems[0].find("unknown") != std::string::npos);

  // Duplicates, bad enums, even azimuth counts.
  CHECK(!ExperimentConfig::validate_text(
             "experiment = pmc-solve\nexperiment = pmc-solve\nseed = 1\n")
             .empty());
  CHECK(!ExperimentConfig::validate_text(
             "experiment = warp-drive\nseed = 1\n")
             .empty());
  CHECK(!ExperimentConfig::validate_text(
             "experiment = pmc-solve\nseed = 1\ngrid.azimuth = 64\n")
             .empty());

  CHECK_THROWS_AS(ExperimentConfig::parse_text("experiment = pmc-solve\n"),
                  ConfigError);
}

TEST_CASE("config accessors and overrides") {
  ExperimentConfig cfg = ExperimentConfig::parse_text(
      "experiment = width-sweep\n"
      "seed = 99\n"
      "sweep.R = 5, 7.5, 10\n"
      "path.center = 0.5, 0, -1\n"
      "relax.step = 0.125\n");
  CHECK(cfg.experiment() == "width-sweep");
  CHECK(cfg.get_seed() == 99);
  CHECK(cfg.get_list("sweep.R") == std::vector<double>{5.0, 7.5, 10.0});
  CHECK(cfg.get_vector("path.center") == Eigen::Vector3d(0.5, 0, -1));
  CHECK(cfg.get_double("relax.step") == 0.125);

  cfg.override_value("seed", "123");
  CHECK(cfg.get_seed() == 123);
  CHECK_THROWS_AS(cfg.override_value("jobs", "0"), ConfigError);
  CHECK_THROWS_AS(cfg.override_value("nonsense", "1"), ConfigError);
}

TEST_CASE("hypothesis-report experiment round trip") {
  TempDir dir("hyp");
  ExperimentConfig cfg = ExperimentConfig::parse_text(
      "experiment = hypothesis-report\n"
      "seed = 5\n"
      "prescription.family = gaussian\n"
      "grid.polar = 12\n"
      "grid.azimuth = 23\n"
      "path.nodes = 41\n");
  RunManifest manifest = run_experiment(cfg, dir.path.string());

  CHECK(manifest.all_passed());
  CHECK(fs::exists(dir.path / "manifest.json"));
  CHECK(fs::exists(dir.path / "hypotheses.json"));
  CHECK(fs::exists(dir.path / "h1_trace.csv"));

  // CSV has a header row.
  std::string csv = slurp(dir.path / "h1_trace.csv");
  CHECK(csv.rfind("radius,", 0) == 0);

  const std::string hyp = slurp(dir.path / "hypotheses.json");
  CHECK(hyp.find("not evaluated (external reference)") != std::string::npos);

  // Determinism: identical config and seed give identical CSV bytes.
  TempDir dir2("hyp2");
  run_experiment(cfg, dir2.path.string());
  CHECK(slurp(dir.path / "h1_trace.csv") == slurp(dir2.path / "h1_trace.csv"));
  CHECK(slurp(dir.path / "hypotheses.json") ==
        slurp(dir2.path / "hypotheses.json"));
}

TEST_CASE("hypothesis-report flags an H2 failure") {
  TempDir dir("hypfail");
  ExperimentConfig cfg = ExperimentConfig::parse_text(
      "experiment = hypothesis-report\n"
      "seed = 5\n"
      "prescription.family = linear-growth\n"
      "hypotheses.width = 4.0\n"
      "grid.polar = 12\n"
      "grid.azimuth = 23\n");
  RunManifest manifest = run_experiment(cfg, dir.path.string());
  CHECK_FALSE(manifest.all_passed());
  bool h2_failed = false;
  for (const auto& a : manifest.assertions) {
    if (a.name == "H2" && !a.pass) h2_failed = true;
  }
  CHECK(h2_failed);
}

TEST_CASE("mini width-sweep experiment end to end") {
  TempDir dir("sweep");
  ExperimentConfig cfg = ExperimentConfig::parse_text(
      "experiment = width-sweep\n"
      "seed = 11\n"
      "prescription.family = gaussian\n"
      "grid.polar = 12\n"
      "grid.azimuth = 23\n"
      "path.nodes = 41\n"
      "width.radii = 2.0\n"
      "sweep.R = 4, 5, 6\n"
      "relax.max_sweeps = 40\n"
      "jobs = 2\n");
  RunManifest manifest = run_experiment(cfg, dir.path.string());
  CHECK(manifest.all_passed());
  CHECK(fs::exists(dir.path / "width_table.csv"));
  CHECK(fs::exists(dir.path / "nice_class.json"));
  CHECK(fs::exists(dir.path / "nodes_last_R.csv"));
  CHECK(fs::exists(dir.path / "argmax_R5.region"));

  std::string table = slurp(dir.path / "width_table.csv");
  CHECK(table.rfind("R,omega,", 0) == 0);
  // Three data rows after the header.
  CHECK(std::count(table.begin(), table.end(), '\n') == 4);
}
