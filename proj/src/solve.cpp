#include "kaczmarz/solve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kaczmarz/problems.hpp"
#include "kaczmarz/rng.hpp"
#include "kaczmarz/selection.hpp"

namespace kaczmarz {

const char* method_name(Method m) {
    switch (m) {
        case Method::Cyclic: return "cyclic";
        case Method::Grk: return "grk";
        case Method::Grko: return "grko";
        case Method::Mwrk: return "mwrk";
        case Method::Mwrko: return "mwrko";
    }
    return "?";
}

std::optional<Method> parse_method(std::string_view name) {
    if (name == "cyclic") return Method::Cyclic;
    if (name == "grk") return Method::Grk;
    if (name == "grko") return Method::Grko;
    if (name == "mwrk") return Method::Mwrk;
    if (name == "mwrko") return Method::Mwrko;
    return std::nullopt;
}

double orthogonal_step(const SparseRowMatrix& a, std::span<const double> r,
                       std::size_t i, std::span<double> x) {
    const double scale = r[i] / a.row_norm_sq(i);
    const auto idx = a.row_indices(i);
    const auto val = a.row_values(i);
    for (std::size_t k = 0; k < idx.size(); ++k) x[idx[k]] += scale * val[k];
    return r[i] * r[i] / a.row_norm_sq(i);
}

ObliqueStep oblique_step(const SparseRowMatrix& a, std::span<const double> r,
                         std::size_t prev, std::size_t next, std::span<double> x,
                         double degenerate_rel_tol) {
    ObliqueStep s;
    s.pair_dot = a.row_pair_dot(prev, next);
    s.dir_norm_sq = a.row_norm_sq(next) - s.pair_dot * s.pair_dot / a.row_norm_sq(prev);
    if (s.dir_norm_sq <= degenerate_rel_tol * a.row_norm_sq(next)) {
        s.degenerate = true;
        orthogonal_step(a, r, next, x);
        return s;
    }
    s.step_length = r[next] / s.dir_norm_sq;

    const auto nidx = a.row_indices(next);
    const auto nval = a.row_values(next);
    for (std::size_t k = 0; k < nidx.size(); ++k)
        x[nidx[k]] += s.step_length * nval[k];

    const double back = s.step_length * s.pair_dot / a.row_norm_sq(prev);
    const auto pidx = a.row_indices(prev);
    const auto pval = a.row_values(prev);
    for (std::size_t k = 0; k < pidx.size(); ++k)
        x[pidx[k]] -= back * pval[k];
    return s;
}

Vector oblique_direction(const SparseRowMatrix& a, std::size_t prev, std::size_t next) {
    Vector w(a.cols(), 0.0);
    const auto nidx = a.row_indices(next);
    const auto nval = a.row_values(next);
    for (std::size_t k = 0; k < nidx.size(); ++k) w[nidx[k]] += nval[k];
    const double back = a.row_pair_dot(prev, next) / a.row_norm_sq(prev);
    const auto pidx = a.row_indices(prev);
    const auto pval = a.row_values(prev);
    for (std::size_t k = 0; k < pidx.size(); ++k) w[pidx[k]] -= back * pval[k];
    return w;
}

SolveReport solve(const SparseRowMatrix& a, const Vector& b, const SolverConfig& cfg,
                  const StepObserver& observer) {
    if (b.size() != a.rows())
        throw ShapeError("solve: rhs length != rows");
    if (!(cfg.omega > 0.0))
        throw std::invalid_argument("solve: omega must be positive");
    if (cfg.max_iters < 1)
        throw std::invalid_argument("solve: max_iters must be at least 1");

    const std::size_t m = a.rows();
    const std::size_t stride =
        cfg.history_stride != 0
            ? cfg.history_stride
            : (static_cast<double>(m) * static_cast<double>(a.cols()) > 1e6 ? 10 : 1);

    SolveReport report;
    report.method = cfg.method;
    report.x.assign(a.cols(), 0.0);

    const auto t0 = std::chrono::steady_clock::now();
    const auto elapsed = [&t0] {
        return std::chrono::duration_cast<std::chrono::nanoseconds>(
            std::chrono::steady_clock::now() - t0);
    };
    const double norm_b_sq = vec::norm_sq(b);
    if (norm_b_sq == 0.0) {
        // x = 0 solves the zero system exactly.
        report.converged = true;
        report.final_rre = 0.0;
        report.rre_history.push_back({0, 0.0, elapsed()});
        report.wall_time = elapsed();
        return report;
    }

    Vector r = b;  // residual of the zero iterate
    report.rre_history.push_back({0, 1.0, elapsed()});
    if (1.0 < cfg.omega) {
        report.converged = true;
        report.final_rre = 1.0;
        report.wall_time = elapsed();
        return report;
    }

    RngStream rng(cfg.seed);
    std::optional<std::size_t> prev_index;
    Vector prev_x;
    if (observer) prev_x = report.x;

    const bool oblique_method = cfg.method == Method::Grko || cfg.method == Method::Mwrko;
    double last_rre = 1.0;

    for (std::size_t k = 1; k <= cfg.max_iters; ++k) {
        std::optional<std::size_t> pick;
        switch (cfg.method) {
            case Method::Cyclic:
                pick = select_cyclic(k - 1, m);
                break;
            case Method::Grk:
                if (auto sel = build_greedy_set(r, a.row_norms_sq(), a.frob_norm_sq()))
                    pick = sample_from_greedy_set(*sel, r, rng);
                break;
            case Method::Grko:
                if (!prev_index) {
                    pick = select_first_index_uniform(m, rng);
                } else if (auto sel =
                               build_greedy_set(r, a.row_norms_sq(), a.frob_norm_sq())) {
                    pick = sample_from_greedy_set(*sel, r, rng);
                }
                break;
            case Method::Mwrk:
            case Method::Mwrko:
                pick = select_max_weighted_residual(r, a.row_norms_sq());
                break;
        }
        if (!pick) {
            // Residual identically zero between stride checks.
            report.converged = true;
            report.iterations = k - 1;
            report.final_rre = 0.0;
            report.last_row = prev_index;
            if (report.rre_history.back().iteration != k - 1)
                report.rre_history.push_back({k - 1, 0.0, elapsed()});
            report.wall_time = elapsed();
            return report;
        }

        bool did_oblique = false;
        bool fell_back = false;
        if (oblique_method && prev_index) {
            const ObliqueStep s = oblique_step(a, r, *prev_index, *pick, report.x,
                                               cfg.degenerate_dir_rel_tol);
            did_oblique = !s.degenerate;
            fell_back = s.degenerate;
            if (s.degenerate) ++report.degenerate_dir_events;
        } else {
            orthogonal_step(a, r, *pick, report.x);
        }

        a.residual(b, report.x, r);  // full recompute each iteration

        if (observer) {
            StepEvent ev;
            ev.k = k;
            ev.index = *pick;
            ev.prev_index = prev_index;
            ev.oblique = did_oblique;
            ev.degenerate_fallback = fell_back;
            ev.x = report.x;
            ev.residual = r;
            ev.step_norm_sq = vec::dist_sq(report.x, prev_x);
            observer(ev);
            prev_x = report.x;
        }
        prev_index = pick;
        report.iterations = k;

        if (k % stride == 0 || k == cfg.max_iters) {
            last_rre = vec::norm_sq(r) / norm_b_sq;
            report.rre_history.push_back({k, last_rre, elapsed()});
            if (last_rre < cfg.omega) {
                report.converged = true;
                break;
            }
        }
    }

    report.final_rre = last_rre;
    report.last_row = prev_index;
    report.wall_time = elapsed();
    return report;
}

SolveReport solve(const Problem& p, const SolverConfig& cfg, const StepObserver& observer) {
    return solve(p.matrix, p.rhs, cfg, observer);
}

}  // namespace kaczmarz
