#include "phi4/series.hpp"

#include <algorithm>

#include "phi4/combinatorics.hpp"

namespace phi4 {

namespace {

/// Exact factorial-ratio coefficients in big-integer arithmetic.
BigInt big_factorial(int n) {
    BigInt r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

BigInt big_multinomial2(int n, int a, int b) {
    return big_factorial(n) / (big_factorial(a) * big_factorial(b));
}

BigInt big_multinomial3(int n, int a, int b, int c) {
    return big_factorial(n) / (big_factorial(a) * big_factorial(b) *
                               big_factorial(c));
}

}  // namespace

double SeriesTable::evaluate(double lambda, int n) const {
    long double acc = 0.0L;
    for (int k = k_max_; k >= 0; --k) {
        acc = acc * static_cast<long double>(lambda) +
              coefficient(n, k).convert_to<long double>();
    }
    return static_cast<double>(acc);
}

SeriesTable perturbative_series(int n_max, int k_max, bool include_j2_zero) {
    // Levels above the internal cut first touch level n at order
    // (n_int + 2 - n)/2 + (n_int + 1)/2 > k_max for this choice of cut.
    const int n_int = std::max(n_max, 2 * k_max + 1);
    const std::size_t slots = static_cast<std::size_t>((n_int + 1) / 2);

    // c[i][k] with i = (n-1)/2.
    std::vector<std::vector<BigInt>> c(
        slots, std::vector<BigInt>(static_cast<std::size_t>(k_max) + 1, 0));
    auto idx = [](int n) { return static_cast<std::size_t>((n - 1) / 2); };

    c[idx(1)][0] = 1;

    for (int k = 1; k <= k_max; ++k) {
        // Closing equation: H^2 = 1 - lambda*H^4.
        c[idx(1)][k] = -c[idx(3)][k - 1];

        for (int n = 3; n <= n_int; n += 2) {
            BigInt total = 0;

            // Linear term: -lambda * H^{n+3}.
            if (n + 2 <= n_int) total -= c[idx(n + 2)][k - 1];

            // Quadratic term: -3*lambda * sum over pairs of
            // n!/(j1! j2!) * H^{j2+2} * H^{j1+1}.
            const bool with_j2_zero = (n == 3) ? false : include_j2_zero;
            for (const auto& p : pair_partitions(n, with_j2_zero)) {
                const BigInt coef = big_multinomial2(n, p.j1, p.j2);
                BigInt conv = 0;
                for (int a = 0; a <= k - 1; ++a) {
                    const BigInt& f1 = c[idx(p.j2 + 1)][a];
                    if (f1 == 0) continue;
                    conv += f1 * c[idx(p.j1)][k - 1 - a];
                }
                total -= 3 * coef * conv;
            }

            // Cubic term: -6*lambda * sum over canonical triples of
            // n!/(i1! i2! i3! * sym) * product of the three entries.
            for (const auto& t : triple_partitions(n)) {
                const BigInt coef =
                    big_multinomial3(n, t.i1, t.i2, t.i3) / symmetry_factor(t);
                BigInt conv = 0;
                for (int a = 0; a <= k - 1; ++a) {
                    const BigInt& f1 = c[idx(t.i1)][a];
                    if (f1 == 0) continue;
                    for (int b = 0; b <= k - 1 - a; ++b) {
                        const BigInt& f2 = c[idx(t.i2)][b];
                        if (f2 == 0) continue;
                        conv += f1 * f2 * c[idx(t.i3)][k - 1 - a - b];
                    }
                }
                total -= 6 * coef * conv;
            }

            c[idx(n)][k] = total;
        }
    }

    SeriesTable table(n_max, k_max, include_j2_zero);
    table.coeffs_.assign(c.begin(),
                         c.begin() + static_cast<std::ptrdiff_t>(
                                         (n_max + 1) / 2));
    return table;
}

}  // namespace phi4
