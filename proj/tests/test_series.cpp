#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "phi4/series.hpp"

using namespace phi4;

TEST_CASE("orders below the minimal power vanish") {
    const SeriesTable t = perturbative_series(9, 6, true);
    CHECK(SeriesTable::minimal_order(1) == 0);
    CHECK(SeriesTable::minimal_order(9) == 4);
    CHECK(t.coefficient(1, 0) == BigInt(1));
    CHECK(t.coefficient(3, 0) == BigInt(0));
    CHECK(t.coefficient(5, 0) == BigInt(0));
    CHECK(t.coefficient(5, 1) == BigInt(0));
    CHECK(t.coefficient(7, 2) == BigInt(0));
    CHECK(t.coefficient(9, 3) == BigInt(0));
}

TEST_CASE("leading coefficients of the full pair set") {
    const SeriesTable t = perturbative_series(9, 6, true);
    CHECK(t.coefficient(1, 0) == BigInt(1));
    CHECK(t.coefficient(1, 1) == BigInt(0));
    CHECK(t.coefficient(1, 2) == BigInt(6));
    CHECK(t.coefficient(1, 3) == BigInt(-54));
    CHECK(t.coefficient(3, 1) == BigInt(-6));
    CHECK(t.coefficient(3, 2) == BigInt(54));
    CHECK(t.coefficient(3, 3) == BigInt(-954));
    CHECK(t.coefficient(5, 2) == BigInt(360));
    CHECK(t.coefficient(5, 3) == BigInt(-10800));
    CHECK(t.coefficient(7, 3) == BigInt(-60480));
}

TEST_CASE("dropping the j2 = 0 pair changes exactly the affected orders") {
    const SeriesTable with = perturbative_series(7, 4, true);
    const SeriesTable without = perturbative_series(7, 4, false);

    // The three-point update always hard-codes the reduced pair set, so its
    // rows agree; the five-point row feels the flag one order above leading.
    CHECK(with.coefficient(3, 1) == without.coefficient(3, 1));
    CHECK(with.coefficient(3, 2) == without.coefficient(3, 2));
    CHECK(with.coefficient(3, 3) == without.coefficient(3, 3));
    CHECK(with.coefficient(5, 2) == without.coefficient(5, 2));
    CHECK(without.coefficient(5, 3) == BigInt(-9720));
    CHECK(with.coefficient(5, 3) == BigInt(-10800));
    CHECK(with.coefficient(7, 3) == without.coefficient(7, 3));
}

TEST_CASE("evaluation sums the frozen head of the two-point series") {
    const SeriesTable t = perturbative_series(3, 8, true);
    const double lam = 1e-3;
    const double head =
        1.0 + 6.0 * lam * lam - 54.0 * lam * lam * lam +
        954.0 * lam * lam * lam * lam;
    CHECK(t.evaluate(lam, 1) == doctest::Approx(head).epsilon(1e-9));
    const double head3 = -6.0 * lam + 54.0 * lam * lam -
                         954.0 * lam * lam * lam;
    CHECK(t.evaluate(lam, 3) == doctest::Approx(head3).epsilon(1e-5));
}

TEST_CASE("signs of the leading terms alternate with the order") {
    const SeriesTable t = perturbative_series(9, 8, true);
    const double lam = 1e-3;
    CHECK(t.evaluate(lam, 1) > 0.0);
    CHECK(t.evaluate(lam, 3) < 0.0);
    CHECK(t.evaluate(lam, 5) > 0.0);
    CHECK(t.evaluate(lam, 7) < 0.0);
    CHECK(t.evaluate(lam, 9) > 0.0);
    for (int n = 1; n <= 9; n += 2) {
        const int expect = ((n - 1) / 2) % 2 == 0 ? 1 : -1;
        const BigInt lead = t.coefficient(n, SeriesTable::minimal_order(n));
        CHECK((lead > 0 ? 1 : -1) == expect);
    }
}

TEST_CASE("a table larger than requested orders internally still truncates") {
    // The recursion needs interior orders up to 2 k_max + 1; the public
    // surface must stay at the requested size.
    const SeriesTable t = perturbative_series(3, 5, true);
    CHECK(t.n_max() == 3);
    CHECK(t.k_max() == 5);
    CHECK(t.coefficient(3, 5) != BigInt(0));
}
