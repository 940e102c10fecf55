#include "phi4/membership.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace phi4 {

namespace {

int expected_sign(int n) { return (((n - 1) / 2) % 2 == 0) ? 1 : -1; }

/// log10((n+1)! * k0^n) for the growth-bound check.
double log10_growth_bound(int n, double k0) {
    const double l10e = 1.0 / std::log(10.0);
    return std::lgamma(static_cast<double>(n) + 2.0) * l10e +
           static_cast<double>(n) * std::log10(k0);
}

}  // namespace

PhiReport check_phi(const GreenSequence& h, double k0, int n_check,
                    bool include_j2_zero, double d0) {
    (void)include_j2_zero;
    PhiReport rep;
    rep.lambda = h.lambda;
    rep.k0 = k0;
    rep.n_checked = (n_check > 0) ? std::min(n_check, h.n_work)
                                  : std::max(5, h.n_work - 4);

    const DeltaSequence delta = extract_delta(h, rep.n_checked);
    const GreenSequence hmin = build_h_min(h.lambda, rep.n_checked);
    const GreenSequence hmax = build_h_max(h.lambda, rep.n_checked, d0);

    constexpr double kBracketSlackLog10 = 1e-9;

    auto note_violation = [&](int n, const char* kind) {
        if (rep.first_violation_n < 0) {
            rep.first_violation_n = n;
            rep.first_violation_kind = kind;
        }
    };

    for (int n = 1; n <= rep.n_checked; n += 2) {
        PhiReport::Row row;
        row.n = n;
        const SignedLog& e = h.at(n);

        row.sign_ok = (e.sign == expected_sign(n)) && e.finite();
        if (!row.sign_ok) note_violation(n, "sign");

        if (n >= 3) {
            const double d = delta.at(n);
            row.delta_positive = std::isfinite(d) && d > 0.0;
            if (!row.delta_positive) note_violation(n, "delta_positive");

            const double lo = delta_min(n, h.lambda);
            const double hi = delta_max(n, h.lambda, d0);
            const double slack = 1e-12 * std::max(1.0, hi);
            row.band_ok = row.delta_positive && d >= lo - slack &&
                          d <= hi + slack;
            if (!row.band_ok) note_violation(n, "band");
        }

        const double lmin = hmin.at(n).sign != 0
                                ? hmin.at(n).log10_mag
                                : -std::numeric_limits<double>::infinity();
        const double lmax = hmax.at(n).sign != 0
                                ? hmax.at(n).log10_mag
                                : -std::numeric_limits<double>::infinity();
        const double le = e.sign != 0
                              ? e.log10_mag
                              : -std::numeric_limits<double>::infinity();
        row.bracket_ok = e.finite() && le >= lmin - kBracketSlackLog10 &&
                         le <= lmax + kBracketSlackLog10;
        if (!row.bracket_ok) note_violation(n, "bracket");

        row.bound_ok =
            e.finite() && le <= log10_growth_bound(n, k0) + kBracketSlackLog10;
        if (!row.bound_ok) note_violation(n, "bound");

        rep.phi_member = rep.phi_member && row.sign_ok && row.delta_positive &&
                         row.band_ok && row.bound_ok;
        rep.phi0_member = rep.phi0_member && row.bracket_ok;
        rep.rows.push_back(row);
    }
    rep.phi0_member = rep.phi0_member && rep.phi_member;
    return rep;
}

StabilityScan check_stability(std::span<const double> lambdas, int n_max,
                              int nu_max, const IterateConfig& cfg) {
    StabilityScan scan;
    const int n_work = n_max + 4;

    for (double lambda : lambdas) {
        StabilityRow row;
        row.lambda = lambda;
        std::ostringstream detail;

        const std::array<std::string, 3> labels = {"max", "min", "h0"};
        for (std::size_t s = 0; s < labels.size(); ++s) {
            GreenSequence start;
            if (labels[s] == "max") {
                start = build_h_max(lambda, n_work, cfg.map.d0);
            } else if (labels[s] == "min") {
                start = build_h_min(lambda, n_work);
            } else {
                start = build_h0(lambda, n_work, cfg.map.include_j2_zero,
                                 cfg.map.d0);
            }
            IterateConfig run_cfg = cfg;
            run_cfg.nu_max = nu_max;
            const IterationTrace trace = iterate(start, labels[s], run_cfg);
            row.status[s] = trace.status;

            if (trace.status == TraceStatus::diverged ||
                trace.status == TraceStatus::singular) {
                row.stable = false;
                if (row.first_bad_nu < 0) row.first_bad_nu = trace.nu_event;
                detail << labels[s] << ":" << to_string(trace.status) << "@nu="
                       << trace.nu_event << " ";
                continue;
            }
            for (std::size_t nu = 0; nu < trace.snapshots.size(); ++nu) {
                const PhiReport rep =
                    check_phi(trace.snapshots[nu].h, kDefaultK0, n_max,
                              cfg.map.include_j2_zero, cfg.map.d0);
                if (!rep.phi0_member) {
                    row.stable = false;
                    if (row.first_bad_nu < 0)
                        row.first_bad_nu = static_cast<int>(nu);
                    detail << labels[s] << ":band-exit@nu=" << nu << "(n="
                           << rep.first_violation_n << ","
                           << rep.first_violation_kind << ") ";
                    break;
                }
            }
        }
        row.detail = detail.str();
        scan.rows.push_back(row);
        if (row.stable) {
            scan.largest_stable_lambda =
                std::max(scan.largest_stable_lambda, lambda);
        }
    }
    return scan;
}

std::vector<LimitRow> check_small_lambda_limits(std::span<const int> n_list,
                                                double lambda_probe,
                                                const IterateConfig& cfg) {
    int top = 5;
    for (int n : n_list) top = std::max(top, n);
    const int n_work = top + 4;

    const GreenSequence h0 =
        build_h0(lambda_probe, n_work, cfg.map.include_j2_zero, cfg.map.d0);
    const IterationTrace trace = iterate(h0, "h0", cfg);
    const DeltaSequence& delta = trace.snapshots.back().delta;

    std::vector<LimitRow> rows;
    for (int n : n_list) {
        LimitRow row;
        row.n = n;
        row.target = (n == 3) ? 6.0 : 3.0 * n * (n - 1);
        if (n == 1) row.target = 0.0;
        row.measured = delta.at(n) / lambda_probe;
        if (n == 1) {
            // delta_1 itself vanishes with the coupling; report it directly.
            row.measured = delta.at(n);
            row.rel_dev = std::fabs(row.measured);
        } else {
            row.rel_dev = std::fabs(row.measured - row.target) /
                          std::fabs(row.target);
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace phi4
