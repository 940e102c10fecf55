#pragma once

// Envelope and bracketing sequences for the zero-dimensional quartic-coupling
// hierarchy: the delta envelopes delta_{n,max} / delta_{n,min}, the maximal /
// minimal Green sequences H_max / H_min, the fundamental sequence H_0, and the
// weighted sup-norm used for distances and divergence detection.

#include <stdexcept>
#include <string>
#include <vector>

#include "phi4/sign_log.hpp"

namespace phi4 {

inline constexpr double kDefaultD0 = 0.001;  ///< envelope saturation constant
inline constexpr double kDefaultK0 = 10.0;   ///< uniform bound constant

/// Raised when a construction hits a vanishing denominator.
class SingularityError : public std::runtime_error {
  public:
    SingularityError(double lambda, int n, const std::string& what_arg)
        : std::runtime_error(what_arg), lambda_(lambda), n_(n) {}
    double lambda() const { return lambda_; }
    int order() const { return n_; }

  private:
    double lambda_;
    int n_;
};

/// A Green-function sequence H = {H^{n+1}} on the odd grid n = 1, 3, ...,
/// n_work, stored in signed log10 form.  The n = 1 entry is H^2.
struct GreenSequence {
    double lambda = 0.0;
    int n_work = 0;  ///< odd, >= 5
    std::vector<SignedLog> entries;

    GreenSequence() = default;
    GreenSequence(double lam, int nw)
        : lambda(lam), n_work(nw),
          entries(static_cast<std::size_t>((nw + 1) / 2)) {}

    static std::size_t index_of(int n) {
        return static_cast<std::size_t>((n - 1) / 2);
    }

    const SignedLog& at(int n) const { return entries[index_of(n)]; }
    SignedLog& at(int n) { return entries[index_of(n)]; }

    bool all_finite() const {
        for (const auto& e : entries)
            if (!e.finite()) return false;
        return true;
    }
};

/// Splitting factors delta_n extracted from (or driving) a Green sequence,
/// on the same odd grid.  delta_1 carries a free sign; delta_n for n >= 3 is
/// positive for admissible sequences.  Entries are linear-scale doubles (the
/// splitting factors are O(1)..O(1/d0) by construction); NaN marks entries
/// whose extraction denominator vanished.
struct DeltaSequence {
    double lambda = 0.0;
    int n_max = 0;  ///< odd; values stored for n = 1, 3, ..., n_max
    std::vector<double> values;
    bool complete = true;  ///< false if any entry was not extractable

    DeltaSequence() = default;
    DeltaSequence(double lam, int nm)
        : lambda(lam), n_max(nm),
          values(static_cast<std::size_t>((nm + 1) / 2), 0.0) {}

    double at(int n) const { return values[GreenSequence::index_of(n)]; }
    double& at(int n) { return values[GreenSequence::index_of(n)]; }
};

/// Upper envelope: 6*lambda at n = 3, else 3*lambda*n*(n-1) damped by d0.
double delta_max(int n, double lambda, double d0 = kDefaultD0);

/// Lower envelope: 6*lambda / (1 + 9*lambda*(1 + 6*lambda^2)) at n = 3, else
/// 3*lambda*n*(n-1) / (1 + 3*lambda*n*(n-1)).
double delta_min(int n, double lambda);

/// Maximal bracketing sequence: H^2 = (1 + 6*lambda^2)^2,
/// H^4 = -6*lambda*(H^2)^3, then the cubic-term recursion driven by
/// delta_max.
GreenSequence build_h_max(double lambda, int n_work, double d0 = kDefaultD0);

/// Minimal bracketing sequence: H^2 = 1, H^4 = -delta_min(3)*(H^2)^3, then
/// the cubic-term recursion driven by delta_min.
GreenSequence build_h_min(double lambda, int n_work);

/// Fundamental sequence: the image of H_min under one application of the
/// update rules — H^2 = 1 - lambda*H^4_min, the three-point splitting
/// 6*lambda / (1 + 9*lambda - lambda*|H^6_min|/|H^4_min|), and for n >= 5
/// delta_{n,0} = 3*lambda*n*(n-1) / (1 + D_n(H_min)) with the discriminant
/// D_n evaluated on the minimal sequence, all fed bottom-up through the
/// cubic-term recursion.  Requires H_min built to n_work + 2 internally.
GreenSequence build_h0(double lambda, int n_work, bool include_j2_zero = true,
                       double d0 = kDefaultD0);

/// Weighted sup-norm weights M_n: M_1 = (1 + 6*lambda^2)^2,
/// M_3 = delta_max(3)*M_1^3, M_n = n*(n-1)*delta_max(n)*M_{n-2}*M_1^2,
/// kept as log10 values.
struct NormWeights {
    double lambda = 0.0;
    int n_work = 0;
    std::vector<double> log10_m;

    double log10_at(int n) const {
        return log10_m[GreenSequence::index_of(n)];
    }
};

NormWeights norm_weights(double lambda, int n_work, double d0 = kDefaultD0);

/// log10 of sup_n |H^{n+1}| / M_n over the stored grid (-inf for the zero
/// sequence).  Restricting to n <= n_limit ignores entries above it.
double seq_norm_log10(const GreenSequence& h, const NormWeights& w,
                      int n_limit = 0);

/// Linear-scale weighted sup-norm; +inf if the log10 form exceeds range.
double seq_norm(const GreenSequence& h, const NormWeights& w);

/// log10 of the weighted sup-norm of the entrywise difference.
double seq_distance_log10(const GreenSequence& a, const GreenSequence& b,
                          const NormWeights& w);

/// Linear-scale distance induced by the weighted sup-norm.
double seq_distance(const GreenSequence& a, const GreenSequence& b,
                    const NormWeights& w);

}  // namespace phi4
