#pragma once

#include "pmclab/config.hpp"

#include <string>
#include <utility>
#include <vector>

namespace pmclab {

struct Assertion {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct RunManifest {
  std::string experiment;
  std::string version;
  double wall_seconds = 0.0;
  std::vector<std::pair<std::string, double>> stage_seconds;
  std::vector<std::string> files;  // paths relative to the output directory
  std::vector<Assertion> assertions;

  bool all_passed() const {
    for (const auto& a : assertions) {
      if (!a.pass) return false;
    }
    return true;
  }
};

// Executes the configured experiment, writes CSV/JSON artifacts and region
// snapshots under out_dir, and finishes with out_dir/manifest.json.
RunManifest run_experiment(const ExperimentConfig& config,
                           const std::string& out_dir);

std::string tool_version();

}  // namespace pmclab
