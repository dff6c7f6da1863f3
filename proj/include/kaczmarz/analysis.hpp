#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "kaczmarz/sparse.hpp"

namespace kaczmarz {

/// Geometry constants governing the per-step contraction bounds.
struct ConvergenceConstants {
    std::size_t rows = 0;
    double frob_norm_sq = 0.0;
    double lambda_min_nz = 0.0;      // smallest nonzero eigenvalue of A^T A
    double gamma1 = 0.0;             // frob_norm_sq minus the smallest M(i)
    std::optional<double> gamma2;    // minus the two smallest; needs rows >= 3
    std::optional<double> delta;     // max over row pairs of sin^2(angle);
                                     // absent above the pair-scan limit
};

/// Per-step contraction factors for the oblique-projection methods, plus the
/// orthogonal-baseline factors for side-by-side comparison. Factors that
/// need delta (and gamma2 for the steady-state ones) are absent when those
/// constants are.
struct BoundFactors {
    double zeta0 = 0.0;              // randomized, first step
    std::optional<double> zeta1;     // randomized, second step
    std::optional<double> zeta_k;    // randomized, steady state
    double rho0 = 0.0;               // deterministic, first step
    std::optional<double> rho1;
    std::optional<double> rho_k;
    double baseline_zeta_k = 0.0;    // orthogonal greedy-randomized bound
    double baseline_rho0 = 0.0;      // orthogonal max-weighted bounds
    double baseline_rho_k = 0.0;
    bool negative_factor = false;    // some factor computed < 0: the constants
                                     // sit outside the bounds' regime
};

struct AnalysisOptions {
    /// The pairwise angle scan is O(rows^2) dot products; above this row
    /// count delta is reported as unavailable instead of silently subsampled.
    std::size_t pair_scan_row_limit = 5000;
};

ConvergenceConstants compute_constants(const SparseRowMatrix& a,
                                       const AnalysisOptions& opts = {});

BoundFactors bound_factors(const ConvergenceConstants& c);

enum class ContractionMode {
    PerStepRho,      // deterministic per-step bound on one run's history
    CumulativeZeta,  // product bound, for histories averaged over trials
};

struct ContractionViolation {
    std::size_t step;  // transition error[step] -> error[step+1]
    double ratio;
    double bound;
};

struct ContractionReport {
    std::vector<ContractionViolation> violations;
    std::size_t steps_checked = 0;
};

/// Checks a squared error-norm history (||x^(k) - x~||^2 for k = 0, 1, ...)
/// against the bound factors. PerStepRho flags steps whose ratio exceeds the
/// applicable rho by more than rel_slack; CumulativeZeta compares each entry
/// against the running product of zeta factors times the initial error.
ContractionReport check_contraction(std::span<const double> error_sq_history,
                                    const BoundFactors& factors, ContractionMode mode,
                                    double rel_slack = 1e-8);

}  // namespace kaczmarz
