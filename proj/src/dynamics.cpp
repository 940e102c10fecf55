#include "phi4/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "phi4/combinatorics.hpp"

namespace phi4 {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kLog10E = 1.0 / std::log(10.0);  // natural log -> log10

void require_entry(const GreenSequence& h, int n, const char* who) {
    if (n < 1 || n > h.n_work) {
        throw std::out_of_range(std::string(who) + ": order " +
                                std::to_string(n) +
                                " outside the stored grid (padding required)");
    }
}

/// Deterministic uniform draw in [-1, 1): uses the raw 64-bit stream so the
/// sequence is identical across standard library implementations.
double rng_uniform_pm1(std::mt19937_64& gen) {
    const double u01 =
        static_cast<double>(gen() >> 11) * (1.0 / 9007199254740992.0);
    return 2.0 * u01 - 1.0;
}

}  // namespace

std::string_view to_string(TraceStatus s) {
    switch (s) {
        case TraceStatus::running: return "running";
        case TraceStatus::converged: return "converged";
        case TraceStatus::diverged: return "diverged";
        case TraceStatus::singular: return "singular";
    }
    return "unknown";
}

PadPolicy pad_policy_from_string(std::string_view s) {
    if (s == "zero") return PadPolicy::zero;
    if (s == "envelope") return PadPolicy::envelope;
    throw std::invalid_argument("unknown pad policy: " + std::string(s));
}

SignedLog term_A(const GreenSequence& h, int n) {
    require_entry(h, n + 2, "term_A");
    return mul_scalar(h.at(n + 2), -h.lambda);
}

SignedLog term_B(const GreenSequence& h, int n, bool include_j2_zero) {
    require_entry(h, n, "term_B");
    SignedAccumulator acc;
    for (const auto& p : pair_partitions(n, include_j2_zero)) {
        const LogCoefficient k = pair_coefficient(n, p);
        SignedLog t = mul(h.at(p.j2 + 1), h.at(p.j1));
        t.log10_mag += k.log_mag * kLog10E;
        acc.add(t);
    }
    return mul_scalar(acc.value(), -3.0 * h.lambda);
}

SignedLog term_C(const GreenSequence& h, int n) {
    require_entry(h, n - 2, "term_C");
    SignedAccumulator acc;
    for (const auto& t : triple_partitions(n)) {
        const LogCoefficient k = triple_coefficient(n, t);
        SignedLog f = mul(mul(h.at(t.i1), h.at(t.i2)), h.at(t.i3));
        f.log10_mag += k.log_mag * kLog10E;
        acc.add(f);
    }
    return mul_scalar(acc.value(), -6.0 * h.lambda);
}

namespace {

double relative_residual(const SignedLog& lhs, const SignedLog& rhs) {
    const SignedLog diff = add(lhs, neg(rhs));
    if (diff.sign == 0) return 0.0;
    const double lmax = std::max(lhs.sign != 0 ? lhs.log10_mag : -kInf,
                                 rhs.sign != 0 ? rhs.log10_mag : -kInf);
    if (lmax == -kInf) return 0.0;
    return std::pow(10.0, diff.log10_mag - lmax);
}

}  // namespace

double equation_residual(const GreenSequence& h, int n, bool include_j2_zero) {
    if (n == 1) {
        const SignedLog rhs =
            add(SignedLog::one(), mul_scalar(h.at(3), -h.lambda));
        return relative_residual(h.at(1), rhs);
    }
    require_entry(h, n + 2, "equation_residual");
    SignedAccumulator acc;
    acc.add(term_A(h, n));
    // The three-point update hard-codes the 9*lambda coefficient, i.e. the
    // pair set without (3, 0); its fixed points satisfy that row.
    acc.add(term_B(h, n, n == 3 ? false : include_j2_zero));
    acc.add(term_C(h, n));
    return relative_residual(h.at(n), acc.value());
}

namespace {

/// delta for the pad slot under the envelope policy.
double pad_delta(const GreenSequence& h, int n, std::string_view label,
                 const MapConfig& cfg) {
    if (label == "max") return delta_max(n, h.lambda, cfg.d0);
    if (label == "min") return delta_min(n, h.lambda);
    // Fundamental-sequence extension: discriminant on a minimal chain with
    // enough headroom for the linear term.
    const GreenSequence hmin = build_h_min(h.lambda, n + 2);
    const SignedLog a = term_A(hmin, n);
    const SignedLog b = term_B(hmin, n, cfg.include_j2_zero);
    const double db = std::pow(10.0, log10_abs_ratio(b, hmin.at(n)));
    const double da = std::pow(10.0, log10_abs_ratio(a, hmin.at(n)));
    return 3.0 * h.lambda * n * (n - 1) / (1.0 + (db - da));
}

}  // namespace

MapResult map_star(const GreenSequence& h, const MapConfig& cfg,
                   std::string_view start_label) {
    const double lambda = h.lambda;
    const int n_work = h.n_work;
    const int n_out = n_work - 2;

    MapResult r;
    r.h = GreenSequence(lambda, n_work);
    r.diag.n_out = n_out;
    const std::size_t slots = h.entries.size();
    r.diag.a.resize(slots);
    r.diag.b.resize(slots);
    r.diag.c.resize(slots);
    r.diag.discriminant.assign(slots, std::numeric_limits<double>::quiet_NaN());
    r.diag.delta_prime.assign(slots, std::numeric_limits<double>::quiet_NaN());

    auto fail = [&](int n) {
        r.singular = true;
        r.singular_n = n;
        return r;
    };

    // n = 1: delta_1' = -H^4, closing equation for the primed two-point value.
    const double delta1p = neg(h.at(3)).to_double();
    r.diag.delta_prime[GreenSequence::index_of(1)] = delta1p;
    r.h.at(1) = add(SignedLog::one(), mul_scalar(h.at(3), -lambda));

    // n = 3: three-point splitting on the input sequence.
    {
        if (h.at(3).is_zero()) return fail(3);
        const double h2 = h.at(1).to_double();
        const double ratio63 = std::pow(10.0, log10_abs_ratio(h.at(5), h.at(3)));
        const double den = 1.0 + 9.0 * lambda * h2 - lambda * ratio63;
        if (std::fabs(den) < 1e-300) return fail(3);
        const double delta3p = 6.0 * lambda / den;
        r.diag.delta_prime[GreenSequence::index_of(3)] = delta3p;
        r.h.at(3) = mul_scalar(pow_int(r.h.at(1), 3), -delta3p);
    }

    // n >= 5: discriminant on the input, cubic term on the primed entries.
    for (int n = 5; n <= n_out; n += 2) {
        const SignedLog a = term_A(h, n);
        const SignedLog b = term_B(h, n, cfg.include_j2_zero);
        const std::size_t i = GreenSequence::index_of(n);
        r.diag.a[i] = a;
        r.diag.b[i] = b;
        if (h.at(n).is_zero()) return fail(n);
        const double db = std::pow(10.0, log10_abs_ratio(b, h.at(n)));
        const double da = std::pow(10.0, log10_abs_ratio(a, h.at(n)));
        const double d = db - da;
        r.diag.discriminant[i] = d;
        const double den = 1.0 + d;
        if (std::fabs(den) < 1e-300) return fail(n);
        const double delta_np = 3.0 * lambda * n * (n - 1) / den;
        r.diag.delta_prime[i] = delta_np;
        const SignedLog c = term_C(r.h, n);
        r.diag.c[i] = c;
        r.h.at(n) = mul_scalar(c, delta_np / (3.0 * lambda * n * (n - 1)));
    }

    // Top slot: not producible from the input grid; fill per policy.
    if (cfg.pad == PadPolicy::zero) {
        r.h.at(n_work) = SignedLog::zero();
    } else {
        const int n = n_work;
        const double dn = pad_delta(h, n, start_label, cfg);
        const SignedLog c = term_C(r.h, n);
        r.h.at(n) = mul_scalar(c, dn / (3.0 * lambda * n * (n - 1)));
    }
    return r;
}

DeltaSequence extract_delta(const GreenSequence& h, int n_max) {
    const int top = (n_max > 0) ? std::min(n_max, h.n_work) : h.n_work;
    DeltaSequence d(h.lambda, top);

    d.at(1) = (h.at(1).to_double() - 1.0) / h.lambda;

    if (top >= 3) {
        if (h.at(1).is_zero()) {
            d.at(3) = std::numeric_limits<double>::quiet_NaN();
            d.complete = false;
        } else {
            // -H^4 / (H^2)^3 via the log ratio to dodge cube overflow.
            const SignedLog num = neg(h.at(3));
            const SignedLog den = pow_int(h.at(1), 3);
            if (num.sign == 0) {
                d.at(3) = 0.0;
            } else {
                d.at(3) = static_cast<double>(num.sign * den.sign) *
                          std::pow(10.0, num.log10_mag - den.log10_mag);
            }
        }
    }

    for (int n = 5; n <= top; n += 2) {
        const SignedLog c = term_C(h, n);
        const SignedLog& e = h.at(n);
        if (c.sign == 0 || e.sign == 0) {
            d.at(n) = e.sign == 0 ? 0.0 : std::numeric_limits<double>::quiet_NaN();
            if (c.sign == 0 && e.sign != 0) d.complete = false;
            continue;
        }
        d.at(n) = 3.0 * h.lambda * n * (n - 1) *
                  static_cast<double>(e.sign * c.sign) *
                  std::pow(10.0, e.log10_mag - c.log10_mag);
    }
    return d;
}

IterationTrace iterate(const GreenSequence& start, std::string_view label,
                       const IterateConfig& cfg) {
    IterationTrace trace;
    trace.lambda = start.lambda;
    trace.start_label = std::string(label);
    trace.n_readout = start.n_work - 4;

    const NormWeights w = norm_weights(start.lambda, start.n_work, cfg.map.d0);
    const double log10_thr = std::log10(cfg.div_threshold);

    trace.snapshots.push_back({extract_delta(start, trace.n_readout), start});

    GreenSequence h = start;
    for (int nu = 1; nu <= cfg.nu_max; ++nu) {
        MapResult r = map_star(h, cfg.map, label);
        if (r.singular) {
            trace.status = TraceStatus::singular;
            trace.nu_event = nu;
            trace.n_event = r.singular_n;
            return trace;
        }
        h = std::move(r.h);
        DeltaSequence d = extract_delta(h, trace.n_readout);
        trace.snapshots.push_back({std::move(d), h});

        if (!h.all_finite() ||
            seq_norm_log10(h, w, trace.n_readout) > log10_thr) {
            trace.status = TraceStatus::diverged;
            trace.nu_event = nu;
            return trace;
        }

        const DeltaSequence& now = trace.snapshots.back().delta;
        const DeltaSequence& prev = trace.snapshots[trace.snapshots.size() - 2].delta;
        double change = 0.0;
        for (int n = 1; n <= trace.n_readout; n += 2) {
            const double a = now.at(n), b = prev.at(n);
            const double scale = std::max({std::fabs(a), std::fabs(b), 1e-30});
            const double rel = std::fabs(a - b) / scale;
            change = std::max(change, rel);
            if (std::isnan(rel)) change = std::numeric_limits<double>::quiet_NaN();
        }
        if (change <= cfg.tol_converge) {
            trace.status = TraceStatus::converged;
            trace.nu_event = nu;
            return trace;
        }
    }
    trace.status = TraceStatus::running;
    return trace;
}

ContractionStats contraction_estimate(double lambda, int n_max, double rho,
                                      int num_pairs, std::uint64_t seed,
                                      const MapConfig& cfg) {
    if (!(rho > 0.0)) throw std::domain_error("contraction_estimate: rho <= 0");
    const int n_work = n_max + 4;
    const GreenSequence h0 = build_h0(lambda, n_work, cfg.include_j2_zero, cfg.d0);
    const NormWeights w = norm_weights(lambda, n_work, cfg.d0);

    std::mt19937_64 gen(seed);

    auto perturb = [&]() {
        GreenSequence g = h0;
        for (int n = 1; n <= n_work; n += 2) {
            const double u = rng_uniform_pm1(gen);
            SignedLog& e = g.at(n);
            if (e.sign != 0) e.log10_mag += std::log10(1.0 + rho * u);
        }
        // Pull back into the ball of radius rho around the center by
        // geometric interpolation (signs are unchanged by the perturbation).
        const double dist_log10 = seq_distance_log10(g, h0, w);
        const double dist = std::pow(10.0, dist_log10);
        if (dist > rho) {
            const double t = rho / dist;
            for (int n = 1; n <= n_work; n += 2) {
                SignedLog& e = g.at(n);
                const SignedLog& c = h0.at(n);
                if (e.sign != 0 && c.sign != 0) {
                    e.log10_mag = c.log10_mag + t * (e.log10_mag - c.log10_mag);
                }
            }
        }
        return g;
    };

    ContractionStats stats;
    stats.lambda = lambda;
    stats.rho = rho;
    stats.num_pairs = num_pairs;
    stats.seed = seed;

    for (int p = 0; p < num_pairs; ++p) {
        GreenSequence ha, hb;
        double dist_log10 = -kInf;
        for (int attempt = 0; attempt < 100; ++attempt) {
            ha = perturb();
            hb = perturb();
            dist_log10 = seq_distance_log10(ha, hb, w);
            if (dist_log10 > -kInf) break;
        }
        const MapResult ma = map_star(ha, cfg);
        const MapResult mb = map_star(hb, cfg);
        double q;
        if (ma.singular || mb.singular) {
            q = kInf;
        } else {
            const double mapped_log10 = seq_distance_log10(ma.h, mb.h, w);
            q = (mapped_log10 == -kInf)
                    ? 0.0
                    : std::pow(10.0, mapped_log10 - dist_log10);
        }
        stats.q.push_back(q);
    }

    stats.q_max = 0.0;
    double sum = 0.0;
    for (double q : stats.q) {
        stats.q_max = std::max(stats.q_max, q);
        sum += q;
    }
    stats.q_mean = stats.q.empty() ? 0.0 : sum / static_cast<double>(stats.q.size());
    return stats;
}

}  // namespace phi4
