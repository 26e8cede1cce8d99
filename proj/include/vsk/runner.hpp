#pragma once

#include <string>
#include <vector>

#include "vsk/config.hpp"

namespace vsk {

struct RunResult {
  int exit_code = 0;  // 0 ok, 2 config error, 3 numerical failure
  std::vector<std::string> files;
  std::string message;
};

// Executes one subcommand (classify, resolvent, volterra, sde, ldp, spde,
// fbm) against a parsed config, writing CSVs and a manifest into out_dir.
// seed_override >= 0 replaces noise.seed.
RunResult run_scenario(const std::string& subcommand, ConfigMap cfg,
                       const std::string& out_dir,
                       std::int64_t seed_override = -1);

// Re-runs the scenario recorded in a manifest file; outputs are byte-identical
// to the original run.
RunResult run_from_manifest(const std::string& manifest_path,
                            const std::string& out_dir);

}  // namespace vsk
