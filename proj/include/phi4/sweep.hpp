#pragma once

// Experiment orchestration: runs the fixed-point iteration over a coupling
// grid and start set, flattens the traces into rows, and emits deterministic
// CSV data plus the three figure sets as static SVGs.

#include <cstdint>
#include <string>
#include <vector>

#include "phi4/dynamics.hpp"

namespace phi4 {

struct SweepConfig {
    /// Core coupling grid of the twenty-iteration study.
    std::vector<double> lambda_list = {0.001, 0.01, 0.03, 0.05, 0.075, 0.1};
    int n_max = 25;   ///< odd, >= 7; rows/figures read n = 7..min(25, n_max)
    int nu_max = 20;
    std::vector<std::string> starts = {"max", "min"};
    double d0 = kDefaultD0;
    double k0 = kDefaultK0;
    bool include_j2_zero = true;
    PadPolicy pad = PadPolicy::zero;
    double tol_converge = 1e-10;
    double div_threshold = 1e6;
    std::string out_dir = "out";
    bool write_csv = true;
    bool write_svg = true;
    std::uint64_t seed = 12345;
    bool strict = false;  ///< nonzero exit if any cell diverges

    /// Additional couplings required by the figure sets; merged into the run
    /// grid when SVG output is requested.
    std::vector<double> figure_lambdas = {0.0005, 0.015, 0.02, 0.025,
                                          0.07, 0.09, 0.15};
};

/// One (coupling, start, iteration, order) observation.
struct SweepRow {
    double lambda = 0.0;
    int n = 0;
    int nu = 0;
    std::string start;
    double delta = 0.0;
    int h_sign = 0;
    double h_log10_abs = 0.0;
    std::string status;  ///< ok | converged | diverged | singular
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<std::string> files_written;
    bool any_divergence = false;
};

/// Runs all (coupling, start) cells (concurrently), assembles sorted rows,
/// and writes the requested outputs under config.out_dir.
SweepResult run_sweep(const SweepConfig& config);

/// Writes rows as CSV: fixed header, 17-significant-digit reals, rows sorted
/// by (lambda, start, nu, n); byte-stable across runs.
void emit_csv(const std::vector<SweepRow>& rows, const std::string& path);

/// Renders one figure set (1: per-coupling convergence figures over the full
/// caption grid; 2: the six-coupling subset; 3: cross-coupling summary
/// overlays).  Returns the files written under path_prefix.
std::vector<std::string> emit_svg(const std::vector<SweepRow>& rows,
                                  int set_id, const std::string& path_prefix);

/// Deterministic float formatting used by the CSV writer (17 significant
/// digits; canonical "inf"/"-inf"/"nan" spellings).
std::string format_real(double v);

}  // namespace phi4
