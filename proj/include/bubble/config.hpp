#pragma once

#include <map>
#include <string>

#include "bubble/grid.hpp"
#include "bubble/solver.hpp"
#include "bubble/waves.hpp"

namespace bubble {

/// Fully resolved run configuration; parse_config fills it from a
/// line-oriented "key = value" file with '#' comments.
struct RunConfig {
    FluidParams params;
    double xi_max = 64.0;
    Index cells = 2048;  // grid intervals; the grid carries cells+1 nodes
    SolverConfig solver;
    InitSpec init;
    Xi0Source xi0_source = Xi0Source::traced;
};

// Strict parser: unknown keys, malformed lines, and out-of-range values are
// rejected with the offending line number. Omitted keys take defaults.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text);

// Every resolved key, normalized to the config-file spelling; what the
// manifest echoes and what reproduces the run.
std::map<std::string, std::string> config_echo(const RunConfig& cfg);

}  // namespace bubble
