#pragma once

#include <string>
#include <vector>

#include "bubble/config.hpp"
#include "bubble/solver.hpp"

namespace bubble {

/// A finished run plus where its files went.
struct RunOutputs {
    Trajectory traj;
    std::vector<std::string> files;
};

// Builds grid and initial data from the config, integrates, finalizes the
// series, and writes series.csv, snapshots/NNNNNN.csv and manifest.json under
// out_dir. Deterministic: identical configs give bit-identical series files.
RunOutputs simulate_run(const RunConfig& cfg, const std::string& out_dir);

// CLI entry points; they report errors on stderr and return the exit status.
int simulate_cmd(const std::string& config_path, const std::string& out_dir);
int sweep_cmd(const std::string& config_path, const std::string& param,
              const std::vector<double>& values, const std::string& out_dir);
int verify_cmd(const std::string& out_dir);

}  // namespace bubble
