#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "phi4/combinatorics.hpp"

using namespace phi4;

TEST_CASE("pair enumeration lists odd j1 ascending") {
    CHECK(pair_partitions(3, true) ==
          std::vector<PairPartition>{{1, 2}, {3, 0}});
    CHECK(pair_partitions(3, false) == std::vector<PairPartition>{{1, 2}});
    CHECK(pair_partitions(5, true) ==
          std::vector<PairPartition>{{1, 4}, {3, 2}, {5, 0}});
    CHECK(pair_partitions(7, false) ==
          std::vector<PairPartition>{{1, 6}, {3, 4}, {5, 2}});
}

TEST_CASE("pair enumeration rejects even or tiny orders") {
    CHECK_THROWS_AS(pair_partitions(4, true), std::domain_error);
    CHECK_THROWS_AS(pair_partitions(1, true), std::domain_error);
    CHECK_THROWS_AS(triple_partitions(6), std::domain_error);
    CHECK_THROWS_AS(triple_partitions(-3), std::domain_error);
}

TEST_CASE("canonical triples are descending-lexicographic") {
    CHECK(triple_partitions(3) == std::vector<TriplePartition>{{1, 1, 1}});
    CHECK(triple_partitions(5) == std::vector<TriplePartition>{{3, 1, 1}});
    CHECK(triple_partitions(7) ==
          std::vector<TriplePartition>{{5, 1, 1}, {3, 3, 1}});
    CHECK(triple_partitions(9) ==
          std::vector<TriplePartition>{{7, 1, 1}, {5, 3, 1}, {3, 3, 3}});
}

TEST_CASE("symmetry integer distinguishes the three orbit shapes") {
    CHECK(symmetry_factor({1, 1, 1}) == 6);
    CHECK(symmetry_factor({5, 3, 1}) == 1);
    CHECK(symmetry_factor({3, 1, 1}) == 2);
    CHECK(symmetry_factor({3, 3, 1}) == 2);
}

TEST_CASE("small multinomial coefficients by hand") {
    // pairs: n!/(j1! j2!)
    CHECK(std::exp(pair_coefficient(3, {1, 2}).log_mag) ==
          doctest::Approx(3.0).epsilon(1e-12));
    CHECK(std::exp(pair_coefficient(3, {3, 0}).log_mag) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::exp(pair_coefficient(5, {1, 4}).log_mag) ==
          doctest::Approx(5.0).epsilon(1e-12));
    CHECK(std::exp(pair_coefficient(5, {3, 2}).log_mag) ==
          doctest::Approx(10.0).epsilon(1e-12));

    // triples: n!/(i1! i2! i3! * symmetry)
    CHECK(std::exp(triple_coefficient(3, {1, 1, 1}).log_mag) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::exp(triple_coefficient(5, {3, 1, 1}).log_mag) ==
          doctest::Approx(10.0).epsilon(1e-12));
    CHECK(std::exp(triple_coefficient(7, {5, 1, 1}).log_mag) ==
          doctest::Approx(21.0).epsilon(1e-12));
    CHECK(std::exp(triple_coefficient(7, {3, 3, 1}).log_mag) ==
          doctest::Approx(70.0).epsilon(1e-12));
    CHECK(std::exp(triple_coefficient(9, {7, 1, 1}).log_mag) ==
          doctest::Approx(36.0).epsilon(1e-12));
    CHECK(std::exp(triple_coefficient(9, {5, 3, 1}).log_mag) ==
          doctest::Approx(504.0).epsilon(1e-12));
    CHECK(std::exp(triple_coefficient(9, {3, 3, 3}).log_mag) ==
          doctest::Approx(280.0).epsilon(1e-12));
}

TEST_CASE("exact 64-bit multinomials match hand values") {
    CHECK(exact_multinomial2(3, 1, 2) == 3);
    CHECK(exact_multinomial2(5, 3, 2) == 10);
    CHECK(exact_multinomial2(62, 31, 31) == 465428353255261088ULL);
    CHECK(exact_multinomial3(3, 1, 1, 1) == 6);
    CHECK(exact_multinomial3(9, 5, 3, 1) == 504);
    CHECK(exact_multinomial3(9, 3, 3, 3) == 1680);
}

TEST_CASE("log coefficients agree with the exact path") {
    for (int n = 3; n <= 31; n += 2) {
        for (const TriplePartition& t : triple_partitions(n)) {
            const double exact =
                static_cast<double>(exact_multinomial3(n, t.i1, t.i2, t.i3)) /
                symmetry_factor(t);
            const double logged = std::exp(triple_coefficient(n, t).log_mag);
            CHECK(logged == doctest::Approx(exact).epsilon(1e-12));
        }
    }
    for (int n = 3; n <= 61; n += 2) {
        for (const PairPartition& p : pair_partitions(n, true)) {
            const double exact =
                static_cast<double>(exact_multinomial2(n, p.j1, p.j2));
            const double logged = std::exp(pair_coefficient(n, p).log_mag);
            CHECK(logged == doctest::Approx(exact).epsilon(1e-12));
        }
    }
}

TEST_CASE("orbit identity: canonical weighting reproduces the ordered sum") {
    CHECK(ordered_odd_triple_sum(3) == 6);
    CHECK(ordered_odd_triple_sum(5) == 60);
    for (int n = 3; n <= 31; n += 2)
        CHECK(ordered_odd_triple_sum(n) == canonical_odd_triple_sum(n));
}

TEST_CASE("orbit multiplicities count every ordered triple") {
    for (int n = 3; n <= 201; n += 2) {
        std::int64_t ordered = 0;
        for (int a = 1; a <= n - 2; a += 2)
            for (int b = 1; a + b <= n - 1; b += 2) ordered += 1;

        std::int64_t weighted = 0;
        for (const TriplePartition& t : triple_partitions(n))
            weighted += 6 / symmetry_factor(t);
        CHECK(ordered == weighted);
    }
}
