#pragma once

// Admissibility predicates for Green sequences: alternating signs, positive
// splitting factors inside the envelope band, the bracket between the minimal
// and maximal sequences, and the factorial growth bound |H^{n+1}| <= n!*K0^n.
// Also the grid-level stability scan and the small-coupling splitting limits.

#include <array>
#include <span>
#include <string>
#include <vector>

#include "phi4/dynamics.hpp"
#include "phi4/sequences.hpp"

namespace phi4 {

/// Per-order admissibility flags plus the two aggregate verdicts.
/// phi_member (signs, positive splitting, envelope band, growth bound)
/// and phi0_member (additionally the H_min/H_max bracket).
struct PhiReport {
    double lambda = 0.0;
    double k0 = kDefaultK0;
    int n_checked = 0;

    struct Row {
        int n = 0;
        bool sign_ok = true;
        bool delta_positive = true;  ///< n >= 3 only; true at n = 1
        bool band_ok = true;         ///< n >= 3 only; true at n = 1
        bool bracket_ok = true;
        bool bound_ok = true;
    };
    std::vector<Row> rows;

    bool phi_member = true;
    bool phi0_member = true;
    int first_violation_n = -1;
    std::string first_violation_kind;

    const Row& row_at(int n) const {
        return rows[static_cast<std::size_t>((n - 1) / 2)];
    }
};

/// Evaluates all flags for odd n <= n_check (defaults to the sequence's
/// readout grid, n_work - 4).  Extraction failures are recorded as per-order
/// violations rather than thrown.
PhiReport check_phi(const GreenSequence& h, double k0 = kDefaultK0,
                    int n_check = 0, bool include_j2_zero = true,
                    double d0 = kDefaultD0);

/// Per-coupling stability verdict: runs the iteration from the maximal,
/// minimal and fundamental starts and reports whether every recorded iterate
/// stays phi0-admissible with a clean status.
struct StabilityRow {
    double lambda = 0.0;
    bool stable = true;
    std::array<TraceStatus, 3> status{};  ///< max, min, fundamental
    int first_bad_nu = -1;
    std::string detail;
};

struct StabilityScan {
    std::vector<StabilityRow> rows;
    double largest_stable_lambda = 0.0;
};

StabilityScan check_stability(std::span<const double> lambdas, int n_max,
                              int nu_max, const IterateConfig& cfg = {});

/// Small-coupling splitting limits: runs the iteration at lambda_probe from
/// the fundamental start and compares delta_n / lambda of the final iterate
/// against 6 (n = 3) and 3*n*(n-1) (n >= 5).
struct LimitRow {
    int n = 0;
    double target = 0.0;
    double measured = 0.0;
    double rel_dev = 0.0;
};

std::vector<LimitRow> check_small_lambda_limits(std::span<const int> n_list,
                                                double lambda_probe,
                                                const IterateConfig& cfg = {});

}  // namespace phi4
