#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "ncrsim/scenarios.hpp"
#include "ncrsim/syslevel.hpp"

namespace ncrsim {

enum class Study { direct_sweep, indirect_sweep, compare_mc, system };

const char* study_name(Study s);

// Fully resolved run configuration. All dB values from config inputs are
// converted to linear units here; the core modules never see dB.
struct RunConfig {
  Study study = Study::direct_sweep;
  std::string output_dir = "out";
  std::uint64_t seed = 1;
  SweepSpec sweep = SweepSpec::defaults();       // direct/indirect sweeps
  CompareSpec compare = CompareSpec::defaults(); // compare-mc
  SystemConfig system;                           // system study
  DeploymentParams deployment;
  std::optional<std::string> deployment_file;
};

struct CliOverrides {
  std::optional<std::string> config_path;
  std::optional<std::string> out_dir;
  std::optional<PaKind> pa_model;
  std::optional<std::uint64_t> seed;
  std::optional<double> paout_step_db;
};

// Resolution order: flags > file > defaults. Unknown keys and
// out-of-documented-range values raise std::runtime_error with the JSON
// path of the offending entry.
RunConfig make_run_config(Study study, const CliOverrides& overrides);

// File layer only (defaults already applied); exposed for tests.
void apply_config_file(RunConfig& cfg, const std::string& path);

} // namespace ncrsim
