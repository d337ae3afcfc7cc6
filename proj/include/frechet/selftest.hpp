#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace frechet {

struct AcceptanceConfig {
    double arcsine_tol = 1e-9; // tolerance used by the arcsine criteria
    bool verbose = false;
};

struct CriterionResult {
    int index = 0;
    std::string name;
    bool passed = false;
    double seconds = 0.0;
    double limit_seconds = 0.0; // 0 = no limit
    std::string detail;
};

/// Runs the eight acceptance criteria with fixed seeds. Each criterion also
/// fails when it exceeds its runtime limit.
std::vector<CriterionResult> run_acceptance_suite(const AcceptanceConfig& config = {});

/// One line per criterion plus a summary; returns true iff everything passed.
bool print_acceptance_table(const std::vector<CriterionResult>& results, std::ostream& out);

} // namespace frechet
