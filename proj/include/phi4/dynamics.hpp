#pragma once

// The equations of motion of the truncated hierarchy and the fixed-point
// update M*.
//
// For odd n >= 3 the equation of motion is
//     H^{n+1} = A^{n+1} + B^{n+1} + C^{n+1}
// with the linear term A = -lambda*H^{n+3}, the quadratic term B summing over
// pair partitions and the cubic term C over canonical odd triples;
// H^2 = 1 - lambda*H^4 closes the system at n = 1.
//
// One update step produces a primed sequence from an input sequence:
//     delta_1' = -H^4,            H^2' = 1 + lambda*delta_1'
//     delta_3' = 6*lambda / (1 + 9*lambda*H^2 - lambda*|H^6|/|H^4|)
//     H^4'     = -delta_3'*(H^2')^3
//     delta_n' = 3*lambda*n*(n-1) / (1 + D_n(H)),   n >= 5
//     D_n(H)   = (|B^{n+1}(H)| - |A^{n+1}(H)|) / |H^{n+1}|
//     H^{n+1}' = delta_n' * C^{n+1}' / (3*lambda*n*(n-1))
// where D_n is evaluated on the INPUT sequence and the cubic term C' on the
// already-primed lower entries, so the update is a bottom-up sweep.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "phi4/sequences.hpp"

namespace phi4 {

/// Supplies the top-of-grid entry that one update step cannot produce
/// (the linear term looks two slots past the grid).
enum class PadPolicy {
    zero,      ///< pad with 0 above the producible range
    envelope,  ///< extend with the start-label's own recursion
};

enum class TraceStatus { running, converged, diverged, singular };

std::string_view to_string(TraceStatus s);
PadPolicy pad_policy_from_string(std::string_view s);

struct MapConfig {
    bool include_j2_zero = true;
    PadPolicy pad = PadPolicy::zero;
    double d0 = kDefaultD0;
};

/// Linear term A^{n+1} = -lambda * H^{n+3}.  Requires entry n+2 on the grid.
SignedLog term_A(const GreenSequence& h, int n);

/// Quadratic term B^{n+1} = -3*lambda * sum over pairs of
/// n!/(j1! j2!) * H^{j2+2} * H^{j1+1}.
SignedLog term_B(const GreenSequence& h, int n, bool include_j2_zero);

/// Cubic term C^{n+1} = -6*lambda * sum over canonical triples of
/// n!/(i1! i2! i3! * sym) * H^{i1+1} * H^{i2+1} * H^{i3+1}.
SignedLog term_C(const GreenSequence& h, int n);

/// Relative residual of the equation of motion at odd n.  At n = 1 the
/// closing equation H^2 = 1 - lambda*H^4 is used.  At n = 3 the quadratic
/// term is evaluated without the (j1, j2) = (3, 0) pair regardless of the
/// flag: the three-point update rule fixes the coefficient 9*lambda, so this
/// is the row its fixed points actually satisfy.
double equation_residual(const GreenSequence& h, int n, bool include_j2_zero);

/// Per-order byproducts of one update step.
struct MapDiagnostics {
    int n_out = 0;  ///< primed entries are defined for odd n <= n_out
    std::vector<SignedLog> a, b, c;   ///< input-side terms, indexed like entries
    std::vector<double> discriminant; ///< D_n for n >= 5 (NaN below)
    std::vector<double> delta_prime;  ///< delta'_n for all odd n

    double d_at(int n) const { return discriminant[GreenSequence::index_of(n)]; }
    double delta_at(int n) const { return delta_prime[GreenSequence::index_of(n)]; }
};

struct MapResult {
    GreenSequence h;          ///< primed sequence on the same grid
    MapDiagnostics diag;
    bool singular = false;    ///< a denominator vanished
    int singular_n = -1;      ///< offending order when singular
};

/// One application of the update.  The primed sequence is produced for odd
/// n <= n_work - 2; the top slot is filled per the padding policy (the
/// envelope policy extends with the recursion matching start_label:
/// "max"/"min" use their envelope, anything else the fundamental-sequence
/// extension).
MapResult map_star(const GreenSequence& h, const MapConfig& cfg,
                   std::string_view start_label = "custom");

/// Splitting factors of a sequence: delta_1 = (H^2 - 1)/lambda,
/// delta_3 = -H^4/(H^2)^3, delta_n = 3*lambda*n*(n-1)*H^{n+1}/C^{n+1} for
/// n >= 5.  Entries whose denominator vanishes are NaN and clear `complete`.
DeltaSequence extract_delta(const GreenSequence& h, int n_max = 0);

struct TraceSnapshot {
    DeltaSequence delta;
    GreenSequence h;
};

/// History of a fixed-point run: snapshots[nu] holds the state after nu
/// update steps (snapshots[0] is the start).
struct IterationTrace {
    double lambda = 0.0;
    std::string start_label;
    int n_readout = 0;  ///< diagnostics grid: odd n <= n_readout
    std::vector<TraceSnapshot> snapshots;
    TraceStatus status = TraceStatus::running;
    int nu_event = -1;  ///< iteration of convergence / divergence / failure
    int n_event = -1;   ///< offending order for singular traces

    const DeltaSequence& delta_at(int nu) const { return snapshots[nu].delta; }
};

struct IterateConfig {
    int nu_max = 20;
    double tol_converge = 1e-10;
    double div_threshold = 1e6;  ///< on |H^{n+1}| / M_n
    MapConfig map;
};

/// Repeated application of the update with convergence / divergence
/// detection.  Convergence: sup over the readout grid of the relative
/// delta-change between consecutive iterations <= tol.  Divergence: any
/// non-finite entry, or the weighted sup-norm ratio exceeding the threshold.
/// The readout grid is n_work - 4 (the top two slots are truncation buffer).
IterationTrace iterate(const GreenSequence& start, std::string_view label,
                       const IterateConfig& cfg);

/// Sampled local-contraction probe around the fundamental sequence: draws
/// seeded pairs in the norm ball of radius rho around H_0, maps both and
/// reports the distance-contraction ratios.
struct ContractionStats {
    double lambda = 0.0;
    double rho = 0.0;
    int num_pairs = 0;
    std::uint64_t seed = 0;
    std::vector<double> q;
    double q_max = 0.0;
    double q_mean = 0.0;
};

ContractionStats contraction_estimate(double lambda, int n_max, double rho,
                                      int num_pairs, std::uint64_t seed,
                                      const MapConfig& cfg = {});

}  // namespace phi4
