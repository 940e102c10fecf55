#pragma once

// Independent perturbative oracle: the unique formal power series solving the
// hierarchy order by order in the coupling.  Every right-hand term carries an
// explicit factor of the coupling, so the order-k coefficient of each entry
// is determined by orders below k and the coefficients are exact integers.
// The oracle deliberately avoids the signed-log float path it validates.

#include <boost/multiprecision/cpp_int.hpp>
#include <vector>

namespace phi4 {

using BigInt = boost::multiprecision::cpp_int;

/// Integer coefficients c[n][k] of H^{n+1}(lambda) = sum_k c_{n,k} lambda^k,
/// for odd n <= n_max and k <= k_max.  The minimal order of H^{n+1} is
/// (n-1)/2, so lower-k coefficients vanish.
class SeriesTable {
  public:
    SeriesTable(int n_max, int k_max, bool include_j2_zero)
        : n_max_(n_max), k_max_(k_max), include_j2_zero_(include_j2_zero) {}

    int n_max() const { return n_max_; }
    int k_max() const { return k_max_; }
    bool include_j2_zero() const { return include_j2_zero_; }

    const BigInt& coefficient(int n, int k) const {
        return coeffs_[static_cast<std::size_t>((n - 1) / 2)]
                      [static_cast<std::size_t>(k)];
    }

    /// Partial sum at a concrete coupling, evaluated by Horner's rule in
    /// extended precision.
    double evaluate(double lambda, int n) const;

    static int minimal_order(int n) { return (n - 1) / 2; }

  private:
    friend SeriesTable perturbative_series(int, int, bool);
    int n_max_;
    int k_max_;
    bool include_j2_zero_;
    std::vector<std::vector<BigInt>> coeffs_;
};

/// Solves the truncated hierarchy order by order.  Internally the truncation
/// is taken high enough that every returned coefficient equals the one of the
/// infinite hierarchy: levels above the internal cut influence a returned
/// entry only at orders beyond k_max.  The n = 3 row always uses the
/// quadratic term without the (3, 0) pair, matching the fixed coefficient of
/// the three-point update rule; include_j2_zero applies to rows n >= 5.
SeriesTable perturbative_series(int n_max, int k_max, bool include_j2_zero);

}  // namespace phi4
