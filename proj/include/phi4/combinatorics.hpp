#pragma once

// Odd-integer partition enumeration and multinomial coefficients for the
// quadratic (B) and cubic (C) terms of the Green-function hierarchy.
//
// The quadratic term sums over pairs (j1, j2), j1 odd, j1 + j2 = n; the cubic
// term sums over canonical triples i1 >= i2 >= i3 of odd numbers with
// i1 + i2 + i3 = n, each weighted by n!/(i1! i2! i3!) divided by the symmetry
// integer of the triple.  Coefficients are produced in log domain because n!
// overflows native reals for the large-n experiments; an exact 64-bit path
// covers the cross-check range.

#include <cstdint>
#include <vector>

namespace phi4 {

/// Pair partition (j1; j2) of n with j1 odd and j2 even, j1 + j2 = n.
struct PairPartition {
    int j1 = 0;
    int j2 = 0;
    bool operator==(const PairPartition&) const = default;
};

/// Canonical odd triple (i1; i2; i3) of n with i1 >= i2 >= i3 >= 1.
struct TriplePartition {
    int i1 = 0;
    int i2 = 0;
    int i3 = 0;
    bool operator==(const TriplePartition&) const = default;
};

/// A strictly positive coefficient stored on the natural-log scale.
struct LogCoefficient {
    int sign = 1;
    double log_mag = 0.0;
};

/// All pairs (j1, j2) with j1 odd, j1 + j2 = n, ascending in j1.
/// j2 = 0 (the pair (n, 0)) is included only when include_j2_zero is set.
/// Throws std::domain_error for even n or n < 3.
std::vector<PairPartition> pair_partitions(int n, bool include_j2_zero);

/// All canonical odd triples summing to n, sorted descending
/// lexicographically, e.g. n = 9 -> (7,1,1), (5,3,1), (3,3,3).
/// Throws std::domain_error for even n or n < 3.
std::vector<TriplePartition> triple_partitions(int n);

/// Symmetry integer: 6 if all three parts equal, 1 if all distinct,
/// 2 otherwise.
int symmetry_factor(const TriplePartition& t);

/// n! / (j1! j2!) in log domain.
LogCoefficient pair_coefficient(int n, const PairPartition& p);

/// n! / (i1! i2! i3! * symmetry_factor) in log domain.
LogCoefficient triple_coefficient(int n, const TriplePartition& t);

/// Exact n! / (a! b!) with a + b = n; valid without overflow for n <= 62.
std::uint64_t exact_multinomial2(int n, int a, int b);

/// Exact n! / (a! b! c!) with a + b + c = n; valid without overflow for the
/// odd-triple shapes used here up to n = 31.
std::uint64_t exact_multinomial3(int n, int a, int b, int c);

/// Brute-force oracle: sum of n!/(a! b! c!) over ALL ordered odd triples
/// (a, b, c) with a + b + c = n.  Exact in 64 bits for odd n <= 31.
std::uint64_t ordered_odd_triple_sum(int n);

/// Same quantity from the canonical enumeration:
/// sum over canonical triples of n!/(i1! i2! i3!) * (6 / symmetry_factor).
std::uint64_t canonical_odd_triple_sum(int n);

}  // namespace phi4
