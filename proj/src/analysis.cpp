#include "kaczmarz/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "kaczmarz/oracle.hpp"

namespace kaczmarz {
namespace {

double smallest_nonzero_gram_eigenvalue(const SparseRowMatrix& a) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    DenseMatrix gram(std::min(m, n), std::min(m, n));
    if (n <= m) {
        for (std::size_t i = 0; i < m; ++i) {
            const auto idx = a.row_indices(i);
            const auto val = a.row_values(i);
            for (std::size_t p = 0; p < idx.size(); ++p)
                for (std::size_t q = 0; q < idx.size(); ++q)
                    gram.at(idx[p], idx[q]) += val[p] * val[q];
        }
    } else {
        // A A^T has the same nonzero spectrum as A^T A.
        for (std::size_t i = 0; i < m; ++i) {
            gram.at(i, i) = a.row_norm_sq(i);
            for (std::size_t j = i + 1; j < m; ++j) {
                const double d = a.row_pair_dot(i, j);
                gram.at(i, j) = d;
                gram.at(j, i) = d;
            }
        }
    }
    const EigenDecomposition dec = dense_sym_eig(gram);
    const double cutoff = kRankCutoffRel * std::max(dec.eigenvalues.back(), 0.0);
    for (double lambda : dec.eigenvalues)
        if (lambda > cutoff) return lambda;
    throw std::runtime_error("compute_constants: Gram matrix has no nonzero eigenvalue");
}

}  // namespace

ConvergenceConstants compute_constants(const SparseRowMatrix& a,
                                       const AnalysisOptions& opts) {
    const std::size_t m = a.rows();
    if (m == 0) throw std::invalid_argument("compute_constants: empty matrix");

    ConvergenceConstants c;
    c.rows = m;
    c.frob_norm_sq = a.frob_norm_sq();
    c.lambda_min_nz = smallest_nonzero_gram_eigenvalue(a);

    double min1 = a.row_norm_sq(0), min2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < m; ++i) {
        const double v = a.row_norm_sq(i);
        if (v < min1) {
            min2 = min1;
            min1 = v;
        } else if (v < min2) {
            min2 = v;
        }
    }
    c.gamma1 = c.frob_norm_sq - min1;
    if (m >= 3) c.gamma2 = c.frob_norm_sq - (min1 + min2);

    if (m <= opts.pair_scan_row_limit && m >= 2) {
        double worst = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = i + 1; j < m; ++j) {
                const double d = a.row_pair_dot(i, j);
                const double sin_sq =
                    1.0 - d * d / (a.row_norm_sq(i) * a.row_norm_sq(j));
                worst = std::max(worst, sin_sq);
            }
        }
        c.delta = worst;
    }
    return c;
}

BoundFactors bound_factors(const ConvergenceConstants& c) {
    const double f = c.frob_norm_sq;
    const double lambda = c.lambda_min_nz;

    BoundFactors out;
    out.zeta0 = 1.0 - lambda / (static_cast<double>(c.rows) * f);
    out.rho0 = 1.0 - lambda / f;
    out.baseline_zeta_k = 1.0 - 0.5 * (f / c.gamma1 + 1.0) * lambda / f;
    out.baseline_rho0 = 1.0 - lambda / f;
    out.baseline_rho_k = 1.0 - lambda / c.gamma1;

    if (c.delta) {
        out.zeta1 = 1.0 - 0.5 * (f / c.gamma1 + 1.0) * lambda / (*c.delta * f);
        out.rho1 = 1.0 - lambda / (*c.delta * c.gamma1);
        if (c.gamma2) {
            out.zeta_k = 1.0 - 0.5 * (f / *c.gamma2 + 1.0) * lambda / (*c.delta * f);
            out.rho_k = 1.0 - lambda / (*c.delta * *c.gamma2);
        }
    }

    const auto negative = [](const std::optional<double>& v) { return v && *v < 0.0; };
    out.negative_factor = out.zeta0 < 0.0 || out.rho0 < 0.0 || negative(out.zeta1) ||
                          negative(out.zeta_k) || negative(out.rho1) ||
                          negative(out.rho_k);
    return out;
}

ContractionReport check_contraction(std::span<const double> error_sq_history,
                                    const BoundFactors& factors, ContractionMode mode,
                                    double rel_slack) {
    ContractionReport report;
    if (error_sq_history.size() < 2) return report;

    if (mode == ContractionMode::PerStepRho) {
        if (!factors.rho1 || !factors.rho_k)
            throw std::invalid_argument(
                "check_contraction: per-step mode needs rho1 and rho_k");
        for (std::size_t s = 0; s + 1 < error_sq_history.size(); ++s) {
            const double cur = error_sq_history[s];
            const double next = error_sq_history[s + 1];
            const double bound =
                s == 0 ? factors.rho0 : (s == 1 ? *factors.rho1 : *factors.rho_k);
            ++report.steps_checked;
            if (cur == 0.0) {
                if (next > 0.0) report.violations.push_back({s, 0.0, bound});
                continue;
            }
            const double ratio = next / cur;
            if (ratio > bound * (1.0 + rel_slack))
                report.violations.push_back({s, ratio, bound});
        }
    } else {
        if (!factors.zeta1 || !factors.zeta_k)
            throw std::invalid_argument(
                "check_contraction: cumulative mode needs zeta1 and zeta_k");
        const double initial = error_sq_history[0];
        double product = 1.0;
        for (std::size_t s = 0; s + 1 < error_sq_history.size(); ++s) {
            product *= s == 0 ? factors.zeta0 : (s == 1 ? *factors.zeta1 : *factors.zeta_k);
            ++report.steps_checked;
            const double bound = product * initial;
            const double next = error_sq_history[s + 1];
            if (next > bound * (1.0 + rel_slack))
                report.violations.push_back({s, initial > 0.0 ? next / initial : 0.0,
                                             product});
        }
    }
    return report;
}

}  // namespace kaczmarz
