#include "phi4/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "phi4/dynamics.hpp"

namespace phi4 {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_lambda(double lambda, const char* who) {
    if (!(lambda > 0.0)) {
        throw std::domain_error(std::string(who) + ": lambda must be > 0");
    }
}

void require_odd_n(int n, int least, const char* who) {
    if (n < least || n % 2 == 0) {
        throw std::domain_error(std::string(who) + ": n must be odd and >= " +
                                std::to_string(least));
    }
}

void require_grid(int n_work, const char* who) {
    if (n_work < 5 || n_work % 2 == 0) {
        throw std::domain_error(std::string(who) +
                                ": n_work must be odd and >= 5");
    }
}

void check_same_grid(const GreenSequence& h, const NormWeights& w,
                     const char* who) {
    if (h.n_work > w.n_work || h.lambda != w.lambda) {
        throw std::invalid_argument(std::string(who) +
                                    ": sequence/weights grid mismatch");
    }
}

}  // namespace

double delta_max(int n, double lambda, double d0) {
    require_lambda(lambda, "delta_max");
    require_odd_n(n, 3, "delta_max");
    if (n == 3) return 6.0 * lambda;
    const double t = 3.0 * lambda * n * (n - 1);
    return t / (1.0 + t * d0);
}

double delta_min(int n, double lambda) {
    require_lambda(lambda, "delta_min");
    require_odd_n(n, 3, "delta_min");
    if (n == 3) {
        return 6.0 * lambda / (1.0 + 9.0 * lambda * (1.0 + 6.0 * lambda * lambda));
    }
    const double t = 3.0 * lambda * n * (n - 1);
    return t / (1.0 + t);
}

namespace {

/// Shared skeleton for the bracketing sequences: seed the n = 1 and n = 3
/// entries, then grow each H^{n+1} = delta_n * C^{n+1} / (3*lambda*n*(n-1))
/// from the entries already present.
template <typename DeltaFn>
GreenSequence build_enveloped(double lambda, int n_work, double h2,
                              double delta3, DeltaFn&& delta_n) {
    GreenSequence h(lambda, n_work);
    h.at(1) = SignedLog::from_double(h2);
    h.at(3) = mul_scalar(pow_int(h.at(1), 3), -delta3);
    for (int n = 5; n <= n_work; n += 2) {
        const SignedLog c = term_C(h, n);
        h.at(n) = mul_scalar(c, delta_n(n) / (3.0 * lambda * n * (n - 1)));
    }
    return h;
}

}  // namespace

GreenSequence build_h_max(double lambda, int n_work, double d0) {
    require_lambda(lambda, "build_h_max");
    require_grid(n_work, "build_h_max");
    const double m1 = 1.0 + 6.0 * lambda * lambda;
    return build_enveloped(lambda, n_work, m1 * m1, 6.0 * lambda,
                           [&](int n) { return delta_max(n, lambda, d0); });
}

GreenSequence build_h_min(double lambda, int n_work) {
    require_lambda(lambda, "build_h_min");
    require_grid(n_work, "build_h_min");
    return build_enveloped(lambda, n_work, 1.0, delta_min(3, lambda),
                           [&](int n) { return delta_min(n, lambda); });
}

GreenSequence build_h0(double lambda, int n_work, bool include_j2_zero,
                       double d0) {
    require_lambda(lambda, "build_h0");
    require_grid(n_work, "build_h0");
    (void)d0;  // the minimal chain below does not involve the damping constant

    // The discriminant D_n needs the linear term two slots up, so the
    // reference minimal sequence is built with that much headroom.
    const GreenSequence hmin = build_h_min(lambda, n_work + 2);

    GreenSequence h(lambda, n_work);

    // n = 1: one update of the closing equation applied to H_min.
    const double h4min = hmin.at(3).to_double();
    h.at(1) = SignedLog::from_double(1.0 - lambda * h4min);

    // n = 3: the three-point splitting evaluated on H_min.
    const double ratio63 =
        std::pow(10.0, log10_abs_ratio(hmin.at(5), hmin.at(3)));
    const double den3 = 1.0 + 9.0 * lambda - lambda * ratio63;
    if (std::fabs(den3) < 1e-300 || !std::isfinite(den3)) {
        throw SingularityError(lambda, 3,
                               "build_h0: vanishing three-point denominator at "
                               "lambda = " + std::to_string(lambda));
    }
    const double delta30 = 6.0 * lambda / den3;
    h.at(3) = mul_scalar(pow_int(h.at(1), 3), -delta30);

    // n >= 5: splitting from the discriminant on H_min, cubic term from the
    // entries of H_0 built so far.
    for (int n = 5; n <= n_work; n += 2) {
        const SignedLog a = term_A(hmin, n);
        const SignedLog b = term_B(hmin, n, include_j2_zero);
        const SignedLog& href = hmin.at(n);
        if (href.is_zero()) {
            throw SingularityError(lambda, n,
                                   "build_h0: vanishing reference entry");
        }
        const double db = std::pow(10.0, log10_abs_ratio(b, href));
        const double da = std::pow(10.0, log10_abs_ratio(a, href));
        const double den = 1.0 + (db - da);
        if (std::fabs(den) < 1e-300 || !std::isfinite(den)) {
            throw SingularityError(lambda, n,
                                   "build_h0: vanishing splitting denominator");
        }
        const double delta_n0 = 3.0 * lambda * n * (n - 1) / den;
        const SignedLog c = term_C(h, n);
        h.at(n) = mul_scalar(c, delta_n0 / (3.0 * lambda * n * (n - 1)));
    }
    return h;
}

NormWeights norm_weights(double lambda, int n_work, double d0) {
    require_lambda(lambda, "norm_weights");
    require_grid(n_work, "norm_weights");
    NormWeights w;
    w.lambda = lambda;
    w.n_work = n_work;
    w.log10_m.resize(static_cast<std::size_t>((n_work + 1) / 2));
    const double log10_m1 = 2.0 * std::log10(1.0 + 6.0 * lambda * lambda);
    w.log10_m[GreenSequence::index_of(1)] = log10_m1;
    w.log10_m[GreenSequence::index_of(3)] =
        std::log10(6.0 * lambda) + 3.0 * log10_m1;
    for (int n = 5; n <= n_work; n += 2) {
        w.log10_m[GreenSequence::index_of(n)] =
            std::log10(static_cast<double>(n) * (n - 1) *
                       delta_max(n, lambda, d0)) +
            w.log10_m[GreenSequence::index_of(n - 2)] + 2.0 * log10_m1;
    }
    return w;
}

double seq_norm_log10(const GreenSequence& h, const NormWeights& w,
                      int n_limit) {
    check_same_grid(h, w, "seq_norm_log10");
    const int top = (n_limit > 0) ? std::min(n_limit, h.n_work) : h.n_work;
    double best = -kInf;
    for (int n = 1; n <= top; n += 2) {
        const SignedLog& e = h.at(n);
        if (e.sign == 0) continue;
        const double r = e.log10_mag - w.log10_at(n);
        if (std::isnan(r)) return std::numeric_limits<double>::quiet_NaN();
        best = std::max(best, r);
    }
    return best;
}

double seq_norm(const GreenSequence& h, const NormWeights& w) {
    const double l = seq_norm_log10(h, w);
    if (l == -kInf) return 0.0;
    return std::pow(10.0, l);
}

double seq_distance_log10(const GreenSequence& a, const GreenSequence& b,
                          const NormWeights& w) {
    check_same_grid(a, w, "seq_distance_log10");
    if (a.n_work != b.n_work || a.lambda != b.lambda) {
        throw std::invalid_argument("seq_distance_log10: grid mismatch");
    }
    double best = -kInf;
    for (int n = 1; n <= a.n_work; n += 2) {
        const SignedLog d = add(a.at(n), neg(b.at(n)));
        if (d.sign == 0) continue;
        const double r = d.log10_mag - w.log10_at(n);
        if (std::isnan(r)) return std::numeric_limits<double>::quiet_NaN();
        best = std::max(best, r);
    }
    return best;
}

double seq_distance(const GreenSequence& a, const GreenSequence& b,
                    const NormWeights& w) {
    const double l = seq_distance_log10(a, b, w);
    if (l == -kInf) return 0.0;
    return std::pow(10.0, l);
}

}  // namespace phi4
