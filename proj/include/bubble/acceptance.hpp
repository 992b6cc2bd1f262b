#pragma once

#include <string>
#include <vector>

namespace bubble {

/// One row of the acceptance table: the measured values against their pinned
/// tolerances, and whether the criterion held.
struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

// Runs the full acceptance suite, writing any run artifacts under work_dir.
// Prints one pass/fail line per criterion to stdout as it goes.
std::vector<CriterionResult> run_acceptance(const std::string& work_dir);

}  // namespace bubble
