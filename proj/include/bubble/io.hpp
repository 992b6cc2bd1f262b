#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bubble/config.hpp"
#include "bubble/diagnostics.hpp"
#include "bubble/solver.hpp"

namespace bubble {

// series.csv: header row then one row per recorded step, 17 significant
// digits throughout so the files round-trip doubles exactly.
void write_series_csv(const std::string& path, const RunSeries& series);

// snapshots/NNNNNN.csv: "# t=<value>" line, header, one row per node.
void write_snapshot_csv(const std::string& path, const SimState& s, const Grid& g,
                        const FluidParams& p, Mode mode);

struct ManifestInfo {
    std::map<std::string, std::string> config;
    FluidParams params;
    Index grid_nodes = 0;
    double dxi = 0.0;
    double wall_time_s = 0.0;
    double cmin = 0.0;
    double cmax = 0.0;
    std::vector<std::string> outputs;
    std::string status;
};
void write_manifest(const std::string& path, const ManifestInfo& info);

// Column-wise loader for the CSV outputs (tests and the sweep summary reader).
std::map<std::string, std::vector<double>> read_csv_columns(const std::string& path);

// FNV-1a over the raw bytes; the determinism check compares these.
std::uint64_t hash_file(const std::string& path);

}  // namespace bubble
