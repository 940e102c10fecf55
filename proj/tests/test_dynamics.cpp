#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <string>

#include "phi4/dynamics.hpp"
#include "phi4/sequences.hpp"

using namespace phi4;

namespace {
constexpr int kWork = 29;
constexpr int kReadout = 25;

/// Small sequence with easy hand-computable entries: 2, -3, 5, -7, 11.
GreenSequence toy_sequence() {
    GreenSequence h(0.1, 9);
    h.at(1) = SignedLog::from_double(2.0);
    h.at(3) = SignedLog::from_double(-3.0);
    h.at(5) = SignedLog::from_double(5.0);
    h.at(7) = SignedLog::from_double(-7.0);
    h.at(9) = SignedLog::from_double(11.0);
    return h;
}
}  // namespace

TEST_CASE("linear term by hand") {
    const GreenSequence h = toy_sequence();
    CHECK(term_A(h, 3).to_double() == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(term_A(h, 7).to_double() == doctest::Approx(-1.1).epsilon(1e-12));
    CHECK_THROWS_AS(term_A(h, 9), std::out_of_range);
}

TEST_CASE("quadratic term by hand, with and without the j2 = 0 pair") {
    const GreenSequence h = toy_sequence();
    // n = 3: pairs (1,2) [coeff 3] and optionally (3,0) [coeff 1]
    CHECK(term_B(h, 3, false).to_double() ==
          doctest::Approx(5.4).epsilon(1e-12));
    CHECK(term_B(h, 3, true).to_double() ==
          doctest::Approx(7.2).epsilon(1e-12));
    // n = 5: pairs (1,4) [5], (3,2) [10], optionally (5,0) [1]
    CHECK(term_B(h, 5, false).to_double() ==
          doctest::Approx(-42.0).epsilon(1e-12));
    CHECK(term_B(h, 5, true).to_double() ==
          doctest::Approx(-45.0).epsilon(1e-12));
}

TEST_CASE("cubic term by hand") {
    const GreenSequence h = toy_sequence();
    // n = 3: triple (1,1,1), weight 1
    CHECK(term_C(h, 3).to_double() == doctest::Approx(-4.8).epsilon(1e-12));
    // n = 5: triple (3,1,1), weight 10
    CHECK(term_C(h, 5).to_double() == doctest::Approx(72.0).epsilon(1e-12));
}

TEST_CASE("toy sequence is far from solving the equations") {
    const GreenSequence h = toy_sequence();
    CHECK(equation_residual(h, 1, true) > 0.1);
    CHECK(equation_residual(h, 3, true) > 0.1);
}

TEST_CASE("converged iterates satisfy every row of the hierarchy") {
    IterateConfig cfg;
    cfg.nu_max = 40;
    const GreenSequence start = build_h_min(0.01, kWork);
    const IterationTrace t = iterate(start, "min", cfg);
    REQUIRE(t.status == TraceStatus::converged);
    const GreenSequence& h = t.snapshots.back().h;
    for (int n = 1; n <= kReadout; n += 2)
        CHECK(equation_residual(h, n, cfg.map.include_j2_zero) < 1e-6);
}

TEST_CASE("splitting extraction inverts the envelope constructions") {
    const double lam = 0.01;
    const DeltaSequence up = extract_delta(build_h_max(lam, kWork), kReadout);
    CHECK(up.at(3) == doctest::Approx(6.0 * lam).epsilon(1e-12));
    for (int n = 5; n <= kReadout; n += 2)
        CHECK(up.at(n) == doctest::Approx(delta_max(n, lam)).epsilon(1e-10));

    const DeltaSequence lo = extract_delta(build_h_min(lam, kWork), kReadout);
    for (int n = 5; n <= kReadout; n += 2)
        CHECK(lo.at(n) == doctest::Approx(delta_min(n, lam)).epsilon(1e-10));

    const DeltaSequence mid = extract_delta(build_h0(lam, kWork), kReadout);
    CHECK(mid.at(1) ==
          doctest::Approx(0.055043144651549365).epsilon(1e-12));
}

TEST_CASE("one update step preserves signs and the positive splitting") {
    const double lam = 0.01;
    const MapConfig cfg;
    const MapResult r = map_star(build_h0(lam, kWork), cfg);
    REQUIRE_FALSE(r.singular);
    for (int n = 1; n <= kWork - 2; n += 2) {
        const int expect = ((n - 1) / 2) % 2 == 0 ? 1 : -1;
        CHECK(r.h.at(n).sign == expect);
        CHECK(r.h.at(n).finite());
    }
    for (int n = 5; n <= kWork - 2; n += 2) {
        CHECK(r.diag.delta_at(n) > 0.0);
        CHECK(r.diag.delta_at(n) < delta_max(n, lam) * (1.0 + 1e-9));
    }
}

TEST_CASE("updated orders depend only on inputs up to two slots higher") {
    const GreenSequence a = build_h0(0.01, kWork);
    GreenSequence b = a;
    b.at(15).log10_mag += std::log10(1.0 + 1e-6);

    const MapConfig cfg;
    const MapResult ra = map_star(a, cfg);
    const MapResult rb = map_star(b, cfg);
    for (int n = 1; n <= 11; n += 2) {
        CHECK(ra.h.at(n).sign == rb.h.at(n).sign);
        CHECK(ra.h.at(n).log10_mag == rb.h.at(n).log10_mag);
    }
    CHECK(ra.h.at(13).log10_mag != rb.h.at(13).log10_mag);
}

TEST_CASE("vanishing four-point entry trips the singularity guard") {
    GreenSequence h = build_h0(0.01, kWork);
    h.at(3) = SignedLog::zero();

    const MapResult r = map_star(h, MapConfig{});
    CHECK(r.singular);
    CHECK(r.singular_n == 3);

    IterateConfig cfg;
    const IterationTrace t = iterate(h, "custom", cfg);
    CHECK(t.status == TraceStatus::singular);
    CHECK(t.nu_event == 1);
    CHECK(t.n_event == 3);
}

TEST_CASE("weak-coupling runs converge from both envelopes") {
    IterateConfig cfg;
    cfg.nu_max = 40;
    const IterationTrace up = iterate(build_h_max(0.001, kWork), "max", cfg);
    const IterationTrace lo = iterate(build_h_min(0.001, kWork), "min", cfg);
    REQUIRE(up.status == TraceStatus::converged);
    REQUIRE(lo.status == TraceStatus::converged);
    CHECK(up.nu_event == 8);
    CHECK(lo.nu_event == 9);

    // Both limits land on the same fixed point.
    const NormWeights w = norm_weights(0.001, kWork);
    CHECK(seq_distance(up.snapshots.back().h, lo.snapshots.back().h, w) <
          1e-9);
}

TEST_CASE("strong coupling oscillates without settling or blowing up") {
    IterateConfig cfg;  // nu_max = 20
    const IterationTrace t = iterate(build_h_max(0.15, kWork), "max", cfg);
    CHECK(t.status == TraceStatus::running);

    // The trace leaves the admissible set immediately (a negative splitting
    // factor at the top order after one step) and keeps moving: the final
    // relative change is ten orders of magnitude above the tolerance.
    CHECK(t.snapshots[1].delta.at(kReadout) < 0.0);
    double last_change = 0.0;
    const DeltaSequence& now = t.snapshots[20].delta;
    const DeltaSequence& prev = t.snapshots[19].delta;
    for (int n = 1; n <= kReadout; n += 2) {
        const double scale =
            std::max({std::fabs(now.at(n)), std::fabs(prev.at(n)), 1e-30});
        last_change =
            std::max(last_change, std::fabs(now.at(n) - prev.at(n)) / scale);
    }
    CHECK(last_change > 0.1);
}

TEST_CASE("a tiny threshold forces an immediate divergence verdict") {
    IterateConfig cfg;
    cfg.div_threshold = 1e-6;
    const IterationTrace t = iterate(build_h_max(0.01, kWork), "max", cfg);
    CHECK(t.status == TraceStatus::diverged);
    CHECK(t.nu_event == 1);
}

TEST_CASE("padding policy controls the top slot") {
    const GreenSequence h = build_h_max(0.01, kWork);

    MapConfig zero_cfg;
    const MapResult rz = map_star(h, zero_cfg, "max");
    CHECK(rz.h.at(kWork).is_zero());

    MapConfig env_cfg;
    env_cfg.pad = PadPolicy::envelope;
    const MapResult re = map_star(h, env_cfg, "max");
    CHECK_FALSE(re.h.at(kWork).is_zero());
    CHECK(re.h.at(kWork).finite());
}

TEST_CASE("status names are stable") {
    CHECK(to_string(TraceStatus::running) == "running");
    CHECK(to_string(TraceStatus::converged) == "converged");
    CHECK(to_string(TraceStatus::diverged) == "diverged");
    CHECK(to_string(TraceStatus::singular) == "singular");
    CHECK(pad_policy_from_string("zero") == PadPolicy::zero);
    CHECK(pad_policy_from_string("envelope") == PadPolicy::envelope);
    CHECK_THROWS_AS(pad_policy_from_string("mirror"), std::invalid_argument);
}

TEST_CASE("contraction sampling is deterministic and contractive here") {
    const ContractionStats s1 = contraction_estimate(0.01, kReadout, 1e-3, 8, 7);
    const ContractionStats s2 = contraction_estimate(0.01, kReadout, 1e-3, 8, 7);
    REQUIRE(s1.q.size() == 8);
    for (std::size_t i = 0; i < s1.q.size(); ++i) CHECK(s1.q[i] == s2.q[i]);
    CHECK(s1.q_max < 1.0);
    CHECK(s1.q_mean <= s1.q_max);
    CHECK(s1.q_mean > 0.0);
}
