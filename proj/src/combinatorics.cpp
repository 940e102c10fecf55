#include "phi4/combinatorics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace phi4 {

namespace {

void require_odd_ge3(int n, const char* who) {
    if (n < 3 || n % 2 == 0) {
        throw std::domain_error(std::string(who) +
                                ": n must be odd and >= 3, got " +
                                std::to_string(n));
    }
}

/// log(n!) via a one-time table: the coefficient loops dominate the runtime
/// of the large-order experiments, and lgamma is far slower than a lookup.
double log_factorial(int n) {
    static const std::vector<double> table = [] {
        std::vector<double> t(2048);
        t[0] = 0.0;
        for (std::size_t i = 1; i < t.size(); ++i) {
            t[i] = t[i - 1] + std::log(static_cast<double>(i));
        }
        return t;
    }();
    if (n >= 0 && static_cast<std::size_t>(n) < table.size()) {
        return table[static_cast<std::size_t>(n)];
    }
    return std::lgamma(static_cast<double>(n) + 1.0);
}

/// Exact binomial via stepwise multiply/divide; every intermediate is an
/// exact integer, so the only constraint is that the result fits in 64 bits.
std::uint64_t exact_binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * static_cast<std::uint64_t>(n - k + i) /
            static_cast<std::uint64_t>(i);
    }
    return r;
}

}  // namespace

std::vector<PairPartition> pair_partitions(int n, bool include_j2_zero) {
    require_odd_ge3(n, "pair_partitions");
    std::vector<PairPartition> out;
    const int j1_top = include_j2_zero ? n : n - 2;
    for (int j1 = 1; j1 <= j1_top; j1 += 2) {
        out.push_back({j1, n - j1});
    }
    return out;
}

std::vector<TriplePartition> triple_partitions(int n) {
    require_odd_ge3(n, "triple_partitions");
    std::vector<TriplePartition> out;
    for (int i1 = n - 2; i1 >= 1; i1 -= 2) {
        for (int i2 = i1; i2 >= 1; i2 -= 2) {
            const int i3 = n - i1 - i2;
            if (i3 < 1 || i3 > i2) continue;
            // i3 inherits oddness: odd minus two odds is odd.
            out.push_back({i1, i2, i3});
        }
    }
    return out;
}

int symmetry_factor(const TriplePartition& t) {
    if (t.i1 == t.i2 && t.i2 == t.i3) return 6;
    if (t.i1 != t.i2 && t.i2 != t.i3) return 1;
    return 2;
}

LogCoefficient pair_coefficient(int n, const PairPartition& p) {
    return {1, log_factorial(n) - log_factorial(p.j1) - log_factorial(p.j2)};
}

LogCoefficient triple_coefficient(int n, const TriplePartition& t) {
    const double lm = log_factorial(n) - log_factorial(t.i1) -
                      log_factorial(t.i2) - log_factorial(t.i3) -
                      std::log(static_cast<double>(symmetry_factor(t)));
    return {1, lm};
}

std::uint64_t exact_multinomial2(int n, int a, int b) {
    if (a + b != n || a < 0 || b < 0) {
        throw std::domain_error("exact_multinomial2: not a partition");
    }
    return exact_binomial(n, a);
}

std::uint64_t exact_multinomial3(int n, int a, int b, int c) {
    if (a + b + c != n || a < 0 || b < 0 || c < 0) {
        throw std::domain_error("exact_multinomial3: not a partition");
    }
    return exact_binomial(n, a) * exact_binomial(n - a, b);
}

std::uint64_t ordered_odd_triple_sum(int n) {
    require_odd_ge3(n, "ordered_odd_triple_sum");
    std::uint64_t total = 0;
    for (int a = 1; a <= n - 2; a += 2) {
        for (int b = 1; b <= n - a - 1; b += 2) {
            const int c = n - a - b;
            if (c < 1) continue;
            total += exact_multinomial3(n, a, b, c);
        }
    }
    return total;
}

std::uint64_t canonical_odd_triple_sum(int n) {
    std::uint64_t total = 0;
    for (const auto& t : triple_partitions(n)) {
        const std::uint64_t m = exact_multinomial3(n, t.i1, t.i2, t.i3);
        total += m * static_cast<std::uint64_t>(6 / symmetry_factor(t));
    }
    return total;
}

}  // namespace phi4
