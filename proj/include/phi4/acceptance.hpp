#pragma once

// The reproduction acceptance suite: nine numbered checks covering the
// convergence grid, divergence, monotone approach, band stability, the
// large-order probe, local contraction, oracle equivalence, small-coupling
// limits, and artifact reproducibility.  Each check reports an honest
// pass/fail verdict plus a one-line quantitative summary; the driver decides
// how to map verdicts to an exit code.

#include <string>
#include <vector>

namespace phi4 {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

struct AcceptanceOptions {
    std::string golden_dir;   ///< committed reference artifacts
    std::string work_dir;     ///< scratch directory for regenerated outputs
    bool run_large_n = true;  ///< include the order-1001 probe
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt);

/// Formats one verdict line: "criterion N: PASS — ...".
std::string format_criterion_line(const CriterionResult& r);

}  // namespace phi4
